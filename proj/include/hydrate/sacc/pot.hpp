#pragma once

// Power-of-two weight codes.
//
// A PoTTensor stores each weight as zero or sign * 2^e with e in
// [e_min, e_max]. The tensor-wide factor 2^layer_scale_exp is pulled out so
// that every per-weight shift e - layer_scale_exp is non-negative: kernels
// shift activations left only, and the scale is reconciled at the output
// stage.

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hydrate/error.hpp"

namespace hydrate::sacc {

/// Largest accepted e_max - e_min. Keeps every shifted 8-bit value far from
/// the 64-bit intermediate range.
inline constexpr int kMaxExponentSpan = 24;

struct PoTCode {
  bool zero = true;
  bool negative = false;
  std::uint8_t shift = 0;  // exponent relative to the tensor's layer_scale_exp

  static constexpr PoTCode make_zero() noexcept { return {}; }
  static constexpr PoTCode make(bool negative, std::uint8_t shift) noexcept { return {false, negative, shift}; }

  /// Integer weight in units of 2^layer_scale_exp.
  constexpr std::int64_t decode() const noexcept {
    if (zero) return 0;
    const std::int64_t v = std::int64_t{1} << shift;
    return negative ? -v : v;
  }

  friend constexpr bool operator==(const PoTCode&, const PoTCode&) = default;
};

/// Distinct codes in {0} U {+-2^e : e_min <= e <= e_max}.
constexpr std::size_t alphabet_size(int e_min, int e_max) noexcept {
  return 1 + 2 * static_cast<std::size_t>(e_max - e_min + 1);
}

/// ceil(log2(alphabet size)).
constexpr int bits_for_range(int e_min, int e_max) noexcept {
  return static_cast<int>(std::bit_width(alphabet_size(e_min, e_max) - 1));
}

inline void check_exponent_range(int e_min, int e_max) {
  if (e_min > e_max) {
    throw ConfigError("e_min " + std::to_string(e_min) + " exceeds e_max " + std::to_string(e_max));
  }
  if (e_min < -128 || e_max > 127) throw ConfigError("exponents must fit in a signed byte");
  if (e_max - e_min > kMaxExponentSpan) {
    throw ConfigError("exponent span " + std::to_string(e_max - e_min) + " exceeds " +
                      std::to_string(kMaxExponentSpan));
  }
}

class PoTTensor {
 public:
  PoTTensor() = default;

  PoTTensor(std::string name, std::vector<std::size_t> shape, std::vector<PoTCode> codes, int e_min, int e_max,
            int layer_scale_exp)
      : name_(std::move(name)),
        shape_(std::move(shape)),
        codes_(std::move(codes)),
        e_min_(e_min),
        e_max_(e_max),
        layer_scale_exp_(layer_scale_exp) {
    check_exponent_range(e_min, e_max);
    if (shape_.empty()) throw DimensionError("PoT tensor needs rank >= 1");
    const auto n = std::accumulate(shape_.begin(), shape_.end(), std::size_t{1}, std::multiplies<>());
    if (n != codes_.size()) {
      throw DimensionError("PoT tensor shape holds " + std::to_string(n) + " elements but " +
                           std::to_string(codes_.size()) + " codes were given");
    }
    if (layer_scale_exp > e_min) throw ConfigError("layer_scale_exp must not exceed e_min");
    for (const auto& c : codes_) {
      if (c.zero) continue;
      const int e = layer_scale_exp + c.shift;
      if (e < e_min || e > e_max) {
        throw ConfigError("code exponent " + std::to_string(e) + " outside [" + std::to_string(e_min) + ", " +
                          std::to_string(e_max) + "]");
      }
    }
  }

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::size_t>& shape() const noexcept { return shape_; }
  std::span<const PoTCode> codes() const noexcept { return codes_; }
  std::size_t size() const noexcept { return codes_.size(); }
  int e_min() const noexcept { return e_min_; }
  int e_max() const noexcept { return e_max_; }
  int layer_scale_exp() const noexcept { return layer_scale_exp_; }
  int bits_per_code() const noexcept { return bits_for_range(e_min_, e_max_); }

  /// Largest shift any code of this tensor may carry.
  int max_shift() const noexcept { return e_max_ - layer_scale_exp_; }

  /// Absolute exponent of a nonzero code.
  int exponent(const PoTCode& c) const noexcept { return layer_scale_exp_ + c.shift; }

  double decoded(std::size_t i) const { return std::ldexp(static_cast<double>(codes_.at(i).decode()), layer_scale_exp_); }

  std::vector<double> decoded_values() const {
    std::vector<double> out(codes_.size());
    for (std::size_t i = 0; i < codes_.size(); ++i) out[i] = decoded(i);
    return out;
  }

  /// Codes of the slice with leading index `row` (e.g. one output channel).
  std::span<const PoTCode> row(std::size_t r) const {
    const std::size_t len = codes_.size() / shape_.front();
    return std::span<const PoTCode>(codes_).subspan(r * len, len);
  }

 private:
  std::string name_;
  std::vector<std::size_t> shape_;
  std::vector<PoTCode> codes_;
  int e_min_ = 0;
  int e_max_ = 0;
  int layer_scale_exp_ = 0;
};

/// Nearest exponent in the log domain: the boundary between 2^e and 2^(e+1)
/// is 2^(e+0.5). Uses frexp so no log2 rounding can move a boundary.
inline int nearest_log2(double magnitude) {
  int q = 0;
  const double m = std::frexp(magnitude, &q);  // magnitude = m * 2^q, m in [0.5, 1)
  return (2.0 * m >= std::numbers::sqrt2) ? q : q - 1;
}

/// Post-training nearest-PoT quantization. Weights with |w| below
/// `zero_threshold` (default 2^(e_min-1)) become zero; the rest round to the
/// nearest power of two in the log domain, clamped to [e_min, e_max].
inline PoTTensor quantize_pot(std::span<const double> weights, std::vector<std::size_t> shape, int e_min, int e_max,
                              std::optional<double> zero_threshold = std::nullopt, std::string name = {}) {
  check_exponent_range(e_min, e_max);
  const double threshold = zero_threshold.value_or(std::ldexp(1.0, e_min - 1));
  std::vector<PoTCode> codes(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (!std::isfinite(w)) throw DataError("non-finite weight at index " + std::to_string(i));
    const double a = std::fabs(w);
    if (a < threshold || a == 0.0) continue;
    int e = nearest_log2(a);
    e = e < e_min ? e_min : (e > e_max ? e_max : e);
    codes[i] = PoTCode::make(w < 0.0, static_cast<std::uint8_t>(e - e_min));
  }
  return PoTTensor(std::move(name), std::move(shape), std::move(codes), e_min, e_max, e_min);
}

/// Weight-count-weighted mean of bits_per_code.
inline double avg_bits(std::span<const PoTTensor> model) {
  if (model.empty()) throw ArgumentError("avg_bits of an empty model");
  double bits = 0.0;
  double count = 0.0;
  for (const auto& t : model) {
    bits += static_cast<double>(t.size()) * t.bits_per_code();
    count += static_cast<double>(t.size());
  }
  if (count == 0.0) throw ArgumentError("avg_bits of a model with no weights");
  return bits / count;
}

}  // namespace hydrate::sacc
