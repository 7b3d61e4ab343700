#pragma once

// Shift-accumulate kernels. Every weight product is a sign flip plus a left
// shift of an 8-bit activation; no multiplier touches a weight.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hydrate/sacc/pot.hpp"

namespace hydrate::sacc {

template <typename T>
concept Activation8 = std::same_as<T, std::int8_t> || std::same_as<T, std::uint8_t>;

/// 8-bit activation tensor with value = code * 2^scale_exp.
template <Activation8 T>
struct QuantActivation {
  std::vector<std::size_t> shape;  // H x W x C for feature maps
  std::vector<T> values;
  int scale_exp = 0;
};

/// 32-bit accumulator tensor with value = acc * 2^scale_exp.
struct AccTensor {
  std::vector<std::size_t> shape;
  std::vector<std::int32_t> values;
  int scale_exp = 0;
};

template <Activation8 T>
constexpr std::int64_t max_abs_activation() noexcept {
  return std::same_as<T, std::int8_t> ? 128 : 255;
}

inline constexpr std::int64_t kAccMax = std::numeric_limits<std::int32_t>::max();

/// Worst-case |accumulator| for `length` terms of |x| <= max_abs_x shifted
/// by at most `max_shift`. Saturates instead of wrapping.
constexpr std::uint64_t accumulation_bound(std::uint64_t length, std::uint64_t max_abs_x, int max_shift) noexcept {
  const std::uint64_t term = max_abs_x << max_shift;
  if (term != 0 && length > std::numeric_limits<std::uint64_t>::max() / term) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return length * term;
}

/// Layer-build check: rejects shapes whose worst case could leave 32 bits.
template <Activation8 T>
void check_layer_bound(std::size_t length, const PoTTensor& w, const std::string& what) {
  const auto bound = accumulation_bound(length, max_abs_activation<T>(), w.max_shift());
  if (bound > static_cast<std::uint64_t>(kAccMax)) {
    throw ArithmeticError(what + ": worst-case accumulator " + std::to_string(bound) +
                          " does not fit in 32 bits (length " + std::to_string(length) + ", max shift " +
                          std::to_string(w.max_shift()) + ")");
  }
}

/// Sum of sign_i * (x_i << shift_i). Result in units of 2^(x scale + layer scale).
template <Activation8 T>
std::int32_t sacc_dot(std::span<const T> x, std::span<const PoTCode> w) {
  if (x.size() != w.size()) {
    throw DimensionError("sacc_dot length mismatch: " + std::to_string(x.size()) + " vs " + std::to_string(w.size()));
  }
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const PoTCode c = w[i];
    if (c.zero) continue;
    const std::int64_t shifted = static_cast<std::int64_t>(x[i]) << c.shift;
    acc += c.negative ? -shifted : shifted;
  }
  if (acc > kAccMax || acc < -kAccMax) {
    throw ArithmeticError("sacc_dot accumulator overflow: " + std::to_string(acc));
  }
  return static_cast<std::int32_t>(acc);
}

/// Dense layer with weights shaped {out, in}.
template <Activation8 T>
std::vector<std::int32_t> dense_sacc(std::span<const T> x, const PoTTensor& w) {
  if (w.shape().size() != 2 || w.shape()[1] != x.size()) {
    throw DimensionError("dense_sacc expects weights {out, " + std::to_string(x.size()) + "}");
  }
  check_layer_bound<T>(x.size(), w, "dense_sacc");
  std::vector<std::int32_t> out(w.shape()[0]);
  for (std::size_t o = 0; o < out.size(); ++o) out[o] = sacc_dot<T>(x, w.row(o));
  return out;
}

inline std::size_t conv_out_dim(std::size_t in, std::size_t k, std::size_t stride, std::size_t pad) {
  if (in + 2 * pad < k) throw DimensionError("kernel larger than padded input");
  return (in + 2 * pad - k) / stride + 1;
}

/// Cross-correlation with zero padding. Input {H, W, C_in}; weights
/// {C_out, k, k, C_in} so each output channel's kernel is one contiguous
/// code row. Output {H_out, W_out, C_out}.
template <Activation8 T>
AccTensor conv2d_sacc(const QuantActivation<T>& input, const PoTTensor& w, std::size_t stride, std::size_t pad) {
  if (input.shape.size() != 3) throw DimensionError("conv2d_sacc input must be H x W x C");
  const auto& ws = w.shape();
  if (ws.size() != 4 || ws[1] != ws[2]) throw DimensionError("conv2d_sacc weights must be C_out x k x k x C_in");
  const std::size_t H = input.shape[0], W = input.shape[1], C = input.shape[2];
  const std::size_t c_out = ws[0], k = ws[1];
  if (ws[3] != C) {
    throw DimensionError("conv2d_sacc channel mismatch: input " + std::to_string(C) + ", weights " +
                         std::to_string(ws[3]));
  }
  if (input.values.size() != H * W * C) throw DimensionError("conv2d_sacc input size does not match its shape");
  if (stride == 0) throw ArgumentError("conv2d_sacc stride must be positive");
  const std::size_t patch_len = k * k * C;
  check_layer_bound<T>(patch_len, w, "conv2d_sacc");

  const std::size_t h_out = conv_out_dim(H, k, stride, pad);
  const std::size_t w_out = conv_out_dim(W, k, stride, pad);
  AccTensor out{{h_out, w_out, c_out}, std::vector<std::int32_t>(h_out * w_out * c_out), input.scale_exp + w.layer_scale_exp()};

  std::vector<T> patch(patch_len);
  for (std::size_t oy = 0; oy < h_out; ++oy) {
    for (std::size_t ox = 0; ox < w_out; ++ox) {
      std::size_t p = 0;
      for (std::size_t ky = 0; ky < k; ++ky) {
        const auto iy = static_cast<std::ptrdiff_t>(oy * stride + ky) - static_cast<std::ptrdiff_t>(pad);
        for (std::size_t kx = 0; kx < k; ++kx) {
          const auto ix = static_cast<std::ptrdiff_t>(ox * stride + kx) - static_cast<std::ptrdiff_t>(pad);
          const bool inside = iy >= 0 && ix >= 0 && iy < static_cast<std::ptrdiff_t>(H) &&
                              ix < static_cast<std::ptrdiff_t>(W);
          for (std::size_t c = 0; c < C; ++c, ++p) {
            patch[p] = inside ? input.values[(static_cast<std::size_t>(iy) * W + static_cast<std::size_t>(ix)) * C + c]
                              : T{0};
          }
        }
      }
      for (std::size_t co = 0; co < c_out; ++co) {
        out.values[(oy * w_out + ox) * c_out + co] = sacc_dot<T>(std::span<const T>(patch), w.row(co));
      }
    }
  }
  return out;
}

/// Output function applied per accumulator:
///   y = clamp(relu?((acc * 2^bn_scale_exp + bn_shift) >> requant_shift))
/// bn_scale_exp may be negative (arithmetic right shift). Shifts floor.
struct OutputStageParams {
  int bn_scale_exp = 0;
  std::int64_t bn_shift = 0;
  bool relu = false;
  int requant_shift = 0;
  std::optional<int> out_scale_exp;  // default: acc scale + requant_shift - bn_scale_exp
};

template <Activation8 T>
struct OutputStageResult {
  QuantActivation<T> output;
  std::size_t saturated = 0;
};

inline std::int64_t apply_output_function(std::int64_t acc, const OutputStageParams& p) {
  std::int64_t v = p.bn_scale_exp >= 0 ? (acc << p.bn_scale_exp) : (acc >> -p.bn_scale_exp);
  v += p.bn_shift;
  if (p.relu && v < 0) v = 0;
  return v >> p.requant_shift;
}

/// `params` holds one entry for the whole tensor or one per channel (last dim).
template <Activation8 T>
OutputStageResult<T> output_stage(const AccTensor& acc, std::span<const OutputStageParams> params) {
  if (params.empty()) throw ArgumentError("output_stage needs parameters");
  const std::size_t channels = acc.shape.empty() ? 1 : acc.shape.back();
  if (params.size() != 1 && params.size() != channels) {
    throw DimensionError("output_stage needs 1 or " + std::to_string(channels) + " parameter sets");
  }
  for (const auto& p : params) {
    if (p.requant_shift < 0 || p.requant_shift > 62) throw ArgumentError("requant_shift out of range");
    if (p.bn_scale_exp > 30 || p.bn_scale_exp < -62) throw ArgumentError("bn_scale_exp out of range");
  }
  constexpr std::int64_t lo = std::numeric_limits<T>::min();
  constexpr std::int64_t hi = std::numeric_limits<T>::max();

  OutputStageResult<T> r;
  r.output.shape = acc.shape;
  r.output.values.resize(acc.values.size());
  const auto& p0 = params.front();
  r.output.scale_exp = p0.out_scale_exp.value_or(acc.scale_exp + p0.requant_shift - p0.bn_scale_exp);
  for (std::size_t i = 0; i < acc.values.size(); ++i) {
    const auto& p = params.size() == 1 ? p0 : params[i % channels];
    std::int64_t v = apply_output_function(acc.values[i], p);
    if (v < lo || v > hi) {
      ++r.saturated;
      v = std::clamp(v, lo, hi);
    }
    r.output.values[i] = static_cast<T>(v);
  }
  return r;
}

template <Activation8 T>
OutputStageResult<T> output_stage(const AccTensor& acc, const OutputStageParams& params) {
  return output_stage<T>(acc, std::span<const OutputStageParams>(&params, 1));
}

/// Output-stage parameters equivalent to real batch norm
///   z = gamma * (x - mean) / sqrt(var + eps) + beta
/// on accumulators with value acc * 2^acc_scale_exp, producing codes with
/// value y * 2^out_scale_exp. The gain is rounded to the nearest power of
/// two; when it already is one the result is within 1 LSB of floor(z / 2^out).
inline OutputStageParams fold_batch_norm(double gamma, double beta, double mean, double var, double eps,
                                         int acc_scale_exp, int out_scale_exp, bool relu) {
  const double gain = gamma / std::sqrt(var + eps);
  if (!(gain > 0.0) || !std::isfinite(gain)) throw DataError("batch-norm gain must be positive and finite");
  const double offset = beta - mean * gain;
  const int gain_exp = nearest_log2(gain);
  // y = floor((acc * 2^(gain_exp + a - o + r) + offset * 2^(r - o)) / 2^r)
  const int r = std::max(0, out_scale_exp - acc_scale_exp - gain_exp);
  OutputStageParams p;
  p.bn_scale_exp = gain_exp + acc_scale_exp - out_scale_exp + r;
  p.bn_shift = static_cast<std::int64_t>(std::llround(std::ldexp(offset, r - out_scale_exp)));
  p.relu = relu;
  p.requant_shift = r;
  p.out_scale_exp = out_scale_exp;
  return p;
}

/// Smallest requantization shift whose saturation rate over the calibration
/// samples stays within `max_saturation_fraction`.
template <Activation8 T>
int calibrate_requant_shift(std::span<const std::int32_t> samples, OutputStageParams base,
                            double max_saturation_fraction = 0.001) {
  if (samples.empty()) throw ArgumentError("calibration needs samples");
  constexpr std::int64_t lo = std::numeric_limits<T>::min();
  constexpr std::int64_t hi = std::numeric_limits<T>::max();
  for (int shift = 0; shift <= 62; ++shift) {
    base.requant_shift = shift;
    std::size_t sat = 0;
    for (auto a : samples) {
      const auto v = apply_output_function(a, base);
      sat += (v < lo || v > hi);
    }
    if (static_cast<double>(sat) <= max_saturation_fraction * static_cast<double>(samples.size())) return shift;
  }
  return 62;
}

}  // namespace hydrate::sacc
