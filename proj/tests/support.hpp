#pragma once

// Test-side generators and oracles. Everything here is written against
// single bits and plain loops so it shares no code path with the packed
// implementations under test.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <unistd.h>
#include <string>
#include <vector>

#include "hydrate/hdc/hypervector.hpp"
#include "hydrate/rng.hpp"

namespace testsupport {

using hydrate::SplitMix64;
using hydrate::hdc::Hypervector;

/// Uniform random vector built bit by bit from a test-local generator.
inline Hypervector gen_hv(SplitMix64& rng, std::size_t dim) {
  Hypervector h(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    if (rng() >> 63) h.set_bit(i, true);
  }
  return h;
}

inline std::vector<bool> to_bits(const Hypervector& h) {
  std::vector<bool> b(h.dim());
  for (std::size_t i = 0; i < h.dim(); ++i) b[i] = (h.words()[i / 64] >> (i % 64)) & 1u;
  return b;
}

inline std::size_t hamming_oracle(const Hypervector& a, const Hypervector& b) {
  const auto x = to_bits(a), y = to_bits(b);
  std::size_t d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) d += x[i] != y[i];
  return d;
}

inline std::size_t gen_size(SplitMix64& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.below(hi - lo + 1));
}

/// Runs `body` on `cases` independent generator states derived from `seed`.
inline void for_all(std::size_t cases, std::uint64_t seed, const std::function<void(SplitMix64&, std::size_t)>& body) {
  for (std::size_t c = 0; c < cases; ++c) {
    SplitMix64 rng(hydrate::derive_seed({seed, c}));
    body(rng, c);
  }
}

/// Fresh scratch directory under the system temp dir, removed on scope exit.
class TempDir {
 public:
  TempDir() {
    static std::uint64_t counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("hydrate_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace testsupport
