#pragma once

// LSTM cell on shift-accumulate matvecs.
//
// Formats:
//   x_t     int8, value = x * 2^x_scale_exp
//   h       int8, value = h * 2^-7
//   c       int16 Q.12
//   biases  Q.12
// Gate pre-activations are assembled in Q.12, passed through the LUT
// nonlinearities, and combined with fixed-point data-data products
// (f * c, i * g, o * tanh(c)); no weight is ever multiplied.

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "hydrate/sacc/kernels.hpp"
#include "hydrate/sacc/lut.hpp"

namespace hydrate::sacc {

inline constexpr int kHiddenScaleExp = -7;

enum Gate : std::size_t { kInputGate = 0, kForgetGate = 1, kCellGate = 2, kOutputGate = 3 };

struct LstmWeights {
  std::array<PoTTensor, 4> input;      // {hidden, input_size}
  std::array<PoTTensor, 4> recurrent;  // {hidden, hidden}
  std::array<std::vector<Fixed>, 4> bias;

  std::size_t hidden() const { return input[0].shape().at(0); }
  std::size_t input_size() const { return input[0].shape().at(1); }

  void validate() const {
    const auto h = hidden();
    const auto n = input_size();
    for (std::size_t g = 0; g < 4; ++g) {
      if (input[g].shape() != std::vector<std::size_t>{h, n}) throw DimensionError("LSTM input weights must be {hidden, input}");
      if (recurrent[g].shape() != std::vector<std::size_t>{h, h}) {
        throw DimensionError("LSTM recurrent weights must be {hidden, hidden}");
      }
      if (bias[g].size() != h) throw DimensionError("LSTM bias must have one entry per hidden unit");
    }
  }
};

struct LstmLuts {
  LutTable sigmoid{LutFunction::sigmoid};
  LutTable tanh{LutFunction::tanh};
};

struct LstmState {
  std::vector<std::int8_t> h;     // scale 2^-7
  std::vector<std::int16_t> c;    // Q.12
  std::vector<Fixed> h_fixed;     // Q.12, before int8 requantization
};

/// Raw accumulators of one gate: W x and U h, in their own scales.
struct GateAccumulators {
  std::vector<std::int32_t> from_input;
  std::vector<std::int32_t> from_hidden;
};

inline GateAccumulators lstm_gate_preactivation_sacc(std::span<const std::int8_t> x, std::span<const std::int8_t> h_prev,
                                                     const PoTTensor& w_input, const PoTTensor& w_recurrent) {
  return {dense_sacc<std::int8_t>(x, w_input), dense_sacc<std::int8_t>(h_prev, w_recurrent)};
}

/// Rescale v * 2^from to Q.12, rounding half up on right shifts.
inline std::int64_t to_q12(std::int64_t v, int from_exp) {
  const int shift = from_exp + kFixedFracBits;
  if (shift >= 0) return v << shift;
  const int s = -shift;
  if (s >= 63) return 0;
  return (v + (std::int64_t{1} << (s - 1))) >> s;
}

/// Q.12 product, rounded half up.
inline std::int64_t mul_q12(std::int64_t a, std::int64_t b) {
  return (a * b + (std::int64_t{1} << (kFixedFracBits - 1))) >> kFixedFracBits;
}

template <typename I>
I saturate(std::int64_t v) {
  return static_cast<I>(std::clamp<std::int64_t>(v, std::numeric_limits<I>::min(), std::numeric_limits<I>::max()));
}

inline LstmState lstm_cell_sacc(std::span<const std::int8_t> x, int x_scale_exp, std::span<const std::int8_t> h_prev,
                                std::span<const std::int16_t> c_prev, const LstmWeights& w, const LstmLuts& luts) {
  w.validate();
  const auto hidden = w.hidden();
  if (x.size() != w.input_size()) throw DimensionError("LSTM input length does not match weights");
  if (h_prev.size() != hidden || c_prev.size() != hidden) throw DimensionError("LSTM state length does not match weights");

  std::array<std::vector<Fixed>, 4> act;
  for (std::size_t g = 0; g < 4; ++g) {
    const auto acc = lstm_gate_preactivation_sacc(x, h_prev, w.input[g], w.recurrent[g]);
    const auto& table = g == kCellGate ? luts.tanh : luts.sigmoid;
    act[g].resize(hidden);
    for (std::size_t j = 0; j < hidden; ++j) {
      const std::int64_t pre = to_q12(acc.from_input[j], x_scale_exp + w.input[g].layer_scale_exp()) +
                               to_q12(acc.from_hidden[j], kHiddenScaleExp + w.recurrent[g].layer_scale_exp()) +
                               w.bias[g][j];
      act[g][j] = lut_eval(table, saturate<Fixed>(pre));
    }
  }

  LstmState out;
  out.h.resize(hidden);
  out.c.resize(hidden);
  out.h_fixed.resize(hidden);
  constexpr int kHiddenDrop = kFixedFracBits + kHiddenScaleExp;  // Q.12 -> 2^-7 units
  for (std::size_t j = 0; j < hidden; ++j) {
    const std::int64_t c = (static_cast<std::int64_t>(act[kForgetGate][j]) * c_prev[j] +
                            static_cast<std::int64_t>(act[kInputGate][j]) * act[kCellGate][j] +
                            (std::int64_t{1} << (kFixedFracBits - 1))) >>
                           kFixedFracBits;
    out.c[j] = saturate<std::int16_t>(c);
    const std::int64_t h = mul_q12(act[kOutputGate][j], lut_eval(luts.tanh, out.c[j]));
    out.h_fixed[j] = static_cast<Fixed>(h);
    out.h[j] = saturate<std::int8_t>((h + (std::int64_t{1} << (kHiddenDrop - 1))) >> kHiddenDrop);
  }
  return out;
}

}  // namespace hydrate::sacc
