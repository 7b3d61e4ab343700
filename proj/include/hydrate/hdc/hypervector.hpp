#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hydrate/error.hpp"
#include "hydrate/rng.hpp"

namespace hydrate::hdc {

inline constexpr std::size_t kWordBits = 64;

inline void check_dim(std::size_t dim) {
  if (dim == 0 || dim % kWordBits != 0) {
    throw ConfigError("hypervector dimension must be a positive multiple of 64, got " +
                      std::to_string(dim));
  }
}

/// Packed binary hypervector. Bit i lives in bit (i % 64) of word (i / 64).
class Hypervector {
 public:
  Hypervector() = default;

  /// All-zeros vector of dimension `dim`.
  explicit Hypervector(std::size_t dim) : dim_(dim) {
    check_dim(dim);
    words_.assign(dim / kWordBits, 0);
  }

  Hypervector(std::size_t dim, std::vector<std::uint64_t> words) : dim_(dim), words_(std::move(words)) {
    check_dim(dim);
    if (words_.size() != dim / kWordBits) {
      throw DimensionError("word count " + std::to_string(words_.size()) +
                           " does not match dimension " + std::to_string(dim));
    }
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t word_count() const noexcept { return words_.size(); }
  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::span<std::uint64_t> words() noexcept { return words_; }

  bool bit(std::size_t i) const noexcept { return (words_[i / kWordBits] >> (i % kWordBits)) & 1u; }

  void set_bit(std::size_t i, bool v) noexcept {
    const auto mask = std::uint64_t{1} << (i % kWordBits);
    if (v) {
      words_[i / kWordBits] |= mask;
    } else {
      words_[i / kWordBits] &= ~mask;
    }
  }

  void flip_bit(std::size_t i) noexcept { words_[i / kWordBits] ^= std::uint64_t{1} << (i % kWordBits); }

  std::size_t popcount() const noexcept {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  friend bool operator==(const Hypervector&, const Hypervector&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<std::uint64_t> words_;
};

inline void require_same_dim(const Hypervector& a, const Hypervector& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("hypervector dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));
  }
}

/// Counter-based generation: word j is a hash of (seed, stream_id, j), so
/// any vector can be regenerated without storing an item memory.
inline Hypervector random_hv(std::uint64_t seed, std::uint64_t stream_id, std::size_t dim) {
  Hypervector hv(dim);
  const std::uint64_t key = derive_seed({seed, stream_id});
  auto w = hv.words();
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = mix64(key ^ mix64(j));
  return hv;
}

inline Hypervector complement(const Hypervector& a) {
  Hypervector r = a;
  for (auto& w : r.words()) w = ~w;
  return r;
}

inline Hypervector xor_bind(const Hypervector& a, const Hypervector& b) {
  require_same_dim(a, b);
  Hypervector r = a;
  auto rw = r.words();
  auto bw = b.words();
  for (std::size_t j = 0; j < rw.size(); ++j) rw[j] ^= bw[j];
  return r;
}

/// Circular rotation towards higher bit indices: result bit (i + r) mod D
/// equals input bit i. Negative r rotates the other way.
inline Hypervector permute_rotate(const Hypervector& a, long long r) {
  const auto dim = static_cast<long long>(a.dim());
  if (dim == 0) return a;
  long long shift = r % dim;
  if (shift < 0) shift += dim;
  if (shift == 0) return a;

  const auto nw = a.word_count();
  const auto word_shift = static_cast<std::size_t>(shift) / kWordBits;
  const auto bit_shift = static_cast<unsigned>(static_cast<std::size_t>(shift) % kWordBits);
  auto in = a.words();
  Hypervector out(a.dim());
  auto ow = out.words();
  for (std::size_t j = 0; j < nw; ++j) {
    const std::uint64_t lo = in[(j + nw - word_shift) % nw];
    if (bit_shift == 0) {
      ow[j] = lo;
    } else {
      const std::uint64_t carry = in[(j + nw - word_shift - 1) % nw];
      ow[j] = (lo << bit_shift) | (carry >> (kWordBits - bit_shift));
    }
  }
  return out;
}

inline std::size_t hamming(const Hypervector& a, const Hypervector& b) {
  require_same_dim(a, b);
  auto aw = a.words();
  auto bw = b.words();
  std::size_t d = 0;
  for (std::size_t j = 0; j < aw.size(); ++j) d += static_cast<std::size_t>(std::popcount(aw[j] ^ bw[j]));
  return d;
}

}  // namespace hydrate::hdc
