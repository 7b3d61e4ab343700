#pragma once

// Lookup-table sigmoid / tanh over [-8, 8] in Q.12 fixed point.
//
// Entry i holds f(-8 + i * step) with step = 16 / size, so the table covers
// [-8, 8 - step] and inputs at or beyond the last entry clamp to it. Lookup
// interpolates linearly between neighbouring entries using shifts only.

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "hydrate/error.hpp"

namespace hydrate::sacc {

inline constexpr int kFixedFracBits = 12;
inline constexpr std::int32_t kFixedOne = 1 << kFixedFracBits;

/// Q.12 fixed point stored in 32 bits.
using Fixed = std::int32_t;

inline Fixed to_fixed(double x) { return static_cast<Fixed>(std::lround(x * kFixedOne)); }
inline double from_fixed(std::int64_t x) { return static_cast<double>(x) / kFixedOne; }

enum class LutFunction { sigmoid, tanh };

inline double exact_function(LutFunction f, double x) {
  return f == LutFunction::sigmoid ? 1.0 / (1.0 + std::exp(-x)) : std::tanh(x);
}

class LutTable {
 public:
  static constexpr double kRangeLo = -8.0;
  static constexpr double kRangeHi = 8.0;

  explicit LutTable(LutFunction fn, std::size_t size = 256) : fn_(fn) {
    // The span 16.0 is 2^16 in Q.12, so a power-of-two size gives a shift-only index.
    if (size < 2 || size > 32768 || !std::has_single_bit(size)) {
      throw ConfigError("LUT size must be a power of two in [2, 32768], got " + std::to_string(size));
    }
    step_shift_ = 16 - static_cast<int>(std::bit_width(size) - 1);
    entries_.resize(size);
    for (std::size_t i = 0; i < size; ++i) {
      const double x = kRangeLo + std::ldexp(static_cast<double>(i), step_shift_ - kFixedFracBits);
      entries_[i] = to_fixed(exact_function(fn, x));
    }
  }

  LutFunction function() const noexcept { return fn_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<Fixed>& entries() const noexcept { return entries_; }

  /// log2 of the entry spacing in Q.12 units.
  int step_shift() const noexcept { return step_shift_; }

 private:
  LutFunction fn_;
  int step_shift_ = 0;
  std::vector<Fixed> entries_;
};

inline Fixed lut_eval(const LutTable& t, Fixed x) {
  constexpr std::int64_t lo = -8 * kFixedOne;
  const auto& e = t.entries();
  const std::int64_t rel = static_cast<std::int64_t>(x) - lo;
  if (rel <= 0) return e.front();
  const auto idx = static_cast<std::size_t>(rel >> t.step_shift());
  if (idx >= e.size() - 1) return e.back();
  const std::int64_t frac = rel & ((std::int64_t{1} << t.step_shift()) - 1);
  const std::int64_t delta = static_cast<std::int64_t>(e[idx + 1]) - e[idx];
  const std::int64_t half = std::int64_t{1} << (t.step_shift() - 1);
  return static_cast<Fixed>(e[idx] + ((delta * frac + half) >> t.step_shift()));
}

}  // namespace hydrate::sacc
