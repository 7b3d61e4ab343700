#pragma once

// "HYDP" PoT model file:
//   magic "HYDP" | version u16 = 1 | tensor_count u16
//   | per tensor: name_len u16 | name (UTF-8) | rank u8 | rank x dim u32
//                | e_min i8 | e_max i8 | layer_scale_exp i8 | packed codes
// Codes are packed LSB-first, bits_per_code each, one row (the innermost
// dimension) at a time with every row starting on a fresh byte. Code index:
// 0 = zero, 1 + 2*(e - e_min) + (negative ? 1 : 0) otherwise.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hydrate/io/binary.hpp"
#include "hydrate/sacc/pot.hpp"

namespace hydrate::sacc {

inline constexpr std::uint16_t kHydpVersion = 1;

inline std::uint32_t code_index(const PoTTensor& t, const PoTCode& c) {
  if (c.zero) return 0;
  return 1 + 2 * static_cast<std::uint32_t>(t.exponent(c) - t.e_min()) + (c.negative ? 1 : 0);
}

inline std::size_t row_bytes(std::size_t row_len, int bits) { return (row_len * static_cast<std::size_t>(bits) + 7) / 8; }

inline std::vector<std::uint8_t> encode_hydp(std::span<const PoTTensor> tensors) {
  io::ByteWriter w;
  w.magic("HYDP");
  w.u16(kHydpVersion);
  w.u16(static_cast<std::uint16_t>(tensors.size()));
  for (const auto& t : tensors) {
    if (t.name().size() > 0xFFFF) throw ArgumentError("tensor name too long");
    w.u16(static_cast<std::uint16_t>(t.name().size()));
    w.bytes(std::span(reinterpret_cast<const std::uint8_t*>(t.name().data()), t.name().size()));
    w.u8(static_cast<std::uint8_t>(t.shape().size()));
    for (auto d : t.shape()) w.u32(static_cast<std::uint32_t>(d));
    w.i8(static_cast<std::int8_t>(t.e_min()));
    w.i8(static_cast<std::int8_t>(t.e_max()));
    w.i8(static_cast<std::int8_t>(t.layer_scale_exp()));

    const int bits = t.bits_per_code();
    const std::size_t row_len = t.shape().back();
    const std::size_t rows = row_len == 0 ? 0 : t.size() / row_len;
    auto codes = t.codes();
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<std::uint8_t> packed(row_bytes(row_len, bits), 0);
      for (std::size_t i = 0; i < row_len; ++i) {
        const std::uint32_t idx = code_index(t, codes[r * row_len + i]);
        for (int b = 0; b < bits; ++b) {
          const std::size_t bit = i * static_cast<std::size_t>(bits) + static_cast<std::size_t>(b);
          if ((idx >> b) & 1u) packed[bit / 8] |= static_cast<std::uint8_t>(1u << (bit % 8));
        }
      }
      w.bytes(packed);
    }
  }
  return w.release();
}

inline std::vector<PoTTensor> decode_hydp(std::span<const std::uint8_t> bytes) {
  io::ByteReader r(bytes);
  r.expect_magic("HYDP");
  r.expect_version(kHydpVersion);
  const auto count = r.u16();
  std::vector<PoTTensor> out;
  out.reserve(count);
  for (std::uint16_t n = 0; n < count; ++n) {
    const auto tensor_at = r.offset();
    const auto name_len = r.u16();
    auto raw_name = r.take(name_len);
    std::string name(raw_name.begin(), raw_name.end());
    const auto rank = r.u8();
    if (rank == 0) throw FormatError("tensor '" + name + "' has rank 0", r.offset() - 1);
    std::vector<std::size_t> shape(rank);
    std::uint64_t elems = 1;
    for (auto& d : shape) {
      d = r.u32();
      elems *= d;
    }
    const auto exp_at = r.offset();
    const int e_min = r.i8();
    const int e_max = r.i8();
    const int scale = r.i8();
    if (e_min > e_max || e_max - e_min > kMaxExponentSpan || scale > e_min) {
      throw FormatError("tensor '" + name + "' has an invalid exponent range", exp_at);
    }
    const int bits = bits_for_range(e_min, e_max);
    const std::size_t row_len = shape.back();
    const std::uint64_t rows = row_len == 0 ? 0 : elems / row_len;
    if (rows * row_bytes(row_len, bits) > r.remaining()) {
      throw FormatError("tensor '" + name + "' code payload is truncated", r.offset());
    }
    const std::uint32_t alphabet = static_cast<std::uint32_t>(alphabet_size(e_min, e_max));
    std::vector<PoTCode> codes(elems);
    for (std::uint64_t row = 0; row < rows; ++row) {
      const auto row_at = r.offset();
      auto packed = r.take(row_bytes(row_len, bits));
      for (std::size_t i = 0; i < row_len; ++i) {
        std::uint32_t idx = 0;
        for (int b = 0; b < bits; ++b) {
          const std::size_t bit = i * static_cast<std::size_t>(bits) + static_cast<std::size_t>(b);
          idx |= static_cast<std::uint32_t>((packed[bit / 8] >> (bit % 8)) & 1u) << b;
        }
        if (idx >= alphabet) {
          throw FormatError("tensor '" + name + "' code index " + std::to_string(idx) + " outside alphabet", row_at);
        }
        if (idx != 0) {
          const int e = e_min + static_cast<int>((idx - 1) / 2);
          codes[row * row_len + i] = PoTCode::make((idx - 1) % 2 == 1, static_cast<std::uint8_t>(e - scale));
        }
      }
    }
    try {
      out.emplace_back(std::move(name), std::move(shape), std::move(codes), e_min, e_max, scale);
    } catch (const Error& e) {
      throw FormatError(e.what(), tensor_at);
    }
  }
  r.expect_end();
  return out;
}

inline void save_hydp(const std::string& path, std::span<const PoTTensor> tensors) {
  io::write_file(path, encode_hydp(tensors));
}

inline std::vector<PoTTensor> load_hydp(const std::string& path) { return decode_hydp(io::read_file(path)); }

}  // namespace hydrate::sacc
