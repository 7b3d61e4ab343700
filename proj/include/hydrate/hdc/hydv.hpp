#pragma once

// "HYDV" hypervector file:
//   magic "HYDV" | version u16 = 1 | dim u32 | count u32 | count x (dim/8 bytes)
// Vectors are stored as their 64-bit words, little-endian.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hydrate/hdc/hypervector.hpp"
#include "hydrate/io/binary.hpp"

namespace hydrate::hdc {

inline constexpr std::uint16_t kHydvVersion = 1;

inline void put_hypervector(io::ByteWriter& w, const Hypervector& hv) {
  for (auto word : hv.words()) w.u64(word);
}

inline Hypervector get_hypervector(io::ByteReader& r, std::size_t dim) {
  std::vector<std::uint64_t> words(dim / kWordBits);
  for (auto& word : words) word = r.u64();
  return Hypervector(dim, std::move(words));
}

inline std::vector<std::uint8_t> encode_hydv(std::span<const Hypervector> vs, std::size_t dim) {
  check_dim(dim);
  io::ByteWriter w;
  w.magic("HYDV");
  w.u16(kHydvVersion);
  w.u32(static_cast<std::uint32_t>(dim));
  w.u32(static_cast<std::uint32_t>(vs.size()));
  for (const auto& v : vs) {
    if (v.dim() != dim) throw DimensionError("HYDV: all vectors must share one dimension");
    put_hypervector(w, v);
  }
  return w.release();
}

struct HydvFile {
  std::size_t dim = 0;
  std::vector<Hypervector> vectors;
};

inline HydvFile decode_hydv(std::span<const std::uint8_t> bytes) {
  io::ByteReader r(bytes);
  r.expect_magic("HYDV");
  r.expect_version(kHydvVersion);
  const auto dim_at = r.offset();
  const auto dim = r.u32();
  if (dim == 0 || dim % kWordBits != 0) {
    throw FormatError("HYDV dimension " + std::to_string(dim) + " is not a positive multiple of 64", dim_at);
  }
  const auto count = r.u32();
  if (static_cast<std::uint64_t>(count) * (dim / 8) > r.remaining()) {
    throw FormatError("HYDV payload shorter than " + std::to_string(count) + " vectors", r.offset());
  }
  HydvFile f;
  f.dim = dim;
  f.vectors.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) f.vectors.push_back(get_hypervector(r, dim));
  r.expect_end();
  return f;
}

inline void save_hydv(const std::string& path, std::span<const Hypervector> vs, std::size_t dim) {
  io::write_file(path, encode_hydv(vs, dim));
}

inline HydvFile load_hydv(const std::string& path) { return decode_hydv(io::read_file(path)); }

}  // namespace hydrate::hdc
