#pragma once

// Random-instance SACC vs MAC equivalence checks (used by `sacc-check`).

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hydrate/rng.hpp"
#include "hydrate/sacc/lstm.hpp"
#include "hydrate/sacc/reference.hpp"

namespace hydrate::sacc {

enum class CheckKernel { dot, conv, dense, lstm };

inline CheckKernel parse_check_kernel(std::string_view s) {
  if (s == "dot") return CheckKernel::dot;
  if (s == "conv") return CheckKernel::conv;
  if (s == "dense") return CheckKernel::dense;
  if (s == "lstm") return CheckKernel::lstm;
  throw ArgumentError("unknown kernel '" + std::string(s) + "' (dot, conv, dense, lstm)");
}

inline std::string_view to_string(CheckKernel k) {
  switch (k) {
    case CheckKernel::dot: return "dot";
    case CheckKernel::conv: return "conv";
    case CheckKernel::dense: return "dense";
    case CheckKernel::lstm: return "lstm";
  }
  return "?";
}

inline std::size_t uniform_in(SplitMix64& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.below(hi - lo + 1));
}

/// Codes with about `zero_pct` percent zeros, signs and shifts uniform.
inline PoTTensor random_pot_tensor(SplitMix64& rng, std::vector<std::size_t> shape, int e_min, int e_max,
                                   unsigned zero_pct = 20) {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  std::vector<PoTCode> codes(n);
  const auto span = static_cast<std::uint64_t>(e_max - e_min + 1);
  for (auto& c : codes) {
    if (rng.below(100) < zero_pct) continue;
    c = PoTCode::make(rng.below(2) == 1, static_cast<std::uint8_t>(rng.below(span)));
  }
  return PoTTensor("w", std::move(shape), std::move(codes), e_min, e_max, e_min);
}

/// Exponent range whose widest shift keeps `length` worst-case terms in 32 bits.
inline std::pair<int, int> random_exponents(SplitMix64& rng, std::size_t length, std::int64_t max_x) {
  int max_shift = 0;
  while (max_shift < 16 && accumulation_bound(length, static_cast<std::uint64_t>(max_x), max_shift + 1) <=
                               static_cast<std::uint64_t>(kAccMax)) {
    ++max_shift;
  }
  const int e_min = -static_cast<int>(rng.below(9));
  const int e_max = e_min + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_shift) + 1));
  return {e_min, e_max};
}

/// Activations with extremes over-represented so saturating paths get hit.
template <Activation8 T>
std::vector<T> random_activations(SplitMix64& rng, std::size_t n) {
  constexpr int lo = std::numeric_limits<T>::min();
  constexpr int hi = std::numeric_limits<T>::max();
  std::vector<T> x(n);
  for (auto& v : x) {
    const auto r = rng.below(10);
    if (r == 0) {
      v = static_cast<T>(lo);
    } else if (r == 1) {
      v = static_cast<T>(hi);
    } else {
      v = static_cast<T>(lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1))));
    }
  }
  return x;
}

struct CheckResult {
  CheckKernel kernel = CheckKernel::dot;
  std::size_t trials = 0;
  std::size_t mismatches = 0;
  std::size_t outputs_compared = 0;
  std::optional<std::string> first_failure;

  bool ok() const noexcept { return mismatches == 0; }
};

namespace detail {

inline bool equal(std::span<const std::int32_t> got, std::span<const std::int64_t> want) {
  if (got.size() != want.size()) return false;
  for (std::size_t i = 0; i < got.size(); ++i) {
    if (static_cast<std::int64_t>(got[i]) != want[i]) return false;
  }
  return true;
}

inline void record(CheckResult& r, std::size_t trial, bool ok, std::size_t outputs) {
  r.outputs_compared += outputs;
  if (ok) return;
  ++r.mismatches;
  if (!r.first_failure) r.first_failure = "trial " + std::to_string(trial);
}

inline void compare(CheckResult& r, std::size_t trial, std::span<const std::int32_t> got,
                    std::span<const std::int64_t> want) {
  record(r, trial, equal(got, want), want.size());
}

template <Activation8 T>
void dot_trial(SplitMix64& rng, CheckResult& r, std::size_t trial) {
  const auto n = uniform_in(rng, 1, 256);
  const auto [e_min, e_max] = random_exponents(rng, n, max_abs_activation<T>());
  const auto w = random_pot_tensor(rng, {n}, e_min, e_max);
  const auto x = random_activations<T>(rng, n);
  const std::int32_t got = sacc_dot<T>(x, w.codes());
  const std::int64_t want = reference::mac_dot<T>(x, w.codes());
  compare(r, trial, std::span(&got, 1), std::span(&want, 1));
}

template <Activation8 T>
void dense_trial(SplitMix64& rng, CheckResult& r, std::size_t trial) {
  const auto out = uniform_in(rng, 1, 16);
  const auto in = uniform_in(rng, 1, 128);
  const auto [e_min, e_max] = random_exponents(rng, in, max_abs_activation<T>());
  const auto w = random_pot_tensor(rng, {out, in}, e_min, e_max);
  const auto x = random_activations<T>(rng, in);
  compare(r, trial, dense_sacc<T>(x, w), reference::mac_dense<T>(x, w));
}

template <Activation8 T>
void conv_trial(SplitMix64& rng, CheckResult& r, std::size_t trial) {
  const std::size_t ks[] = {1, 3, 5};
  const auto k = ks[rng.below(3)];
  const auto pad = uniform_in(rng, 0, k / 2);
  const auto stride = uniform_in(rng, 1, 2);
  const auto h = uniform_in(rng, k > 2 * pad ? k - 2 * pad : 1, 9);
  const auto wd = uniform_in(rng, k > 2 * pad ? k - 2 * pad : 1, 9);
  const auto c_in = uniform_in(rng, 1, 6);
  const auto c_out = uniform_in(rng, 1, 6);
  const auto [e_min, e_max] = random_exponents(rng, k * k * c_in, max_abs_activation<T>());
  const auto w = random_pot_tensor(rng, {c_out, k, k, c_in}, e_min, e_max);
  QuantActivation<T> x{{h, wd, c_in}, random_activations<T>(rng, h * wd * c_in), 0};
  const auto got = conv2d_sacc<T>(x, w, stride, pad);
  compare(r, trial, got.values, reference::mac_conv2d<T>(x, w, stride, pad));
}

inline void lstm_trial(SplitMix64& rng, CheckResult& r, std::size_t trial) {
  const auto hidden = uniform_in(rng, 1, 16);
  const auto in = uniform_in(rng, 1, 32);
  const auto [ei_min, ei_max] = random_exponents(rng, in, 128);
  const auto [er_min, er_max] = random_exponents(rng, hidden, 128);
  const auto wi = random_pot_tensor(rng, {hidden, in}, ei_min, ei_max);
  const auto wr = random_pot_tensor(rng, {hidden, hidden}, er_min, er_max);
  const auto x = random_activations<std::int8_t>(rng, in);
  const auto h = random_activations<std::int8_t>(rng, hidden);
  const auto acc = lstm_gate_preactivation_sacc(x, h, wi, wr);
  const auto want_x = reference::mac_dense<std::int8_t>(x, wi);
  const auto want_h = reference::mac_dense<std::int8_t>(h, wr);
  record(r, trial, equal(acc.from_input, want_x) && equal(acc.from_hidden, want_h), want_x.size() + want_h.size());
}

}  // namespace detail

/// Runs `trials` random instances; signed and unsigned activations alternate
/// for the dot, dense and conv kernels.
inline CheckResult sacc_check(CheckKernel kernel, std::size_t trials, std::uint64_t seed) {
  CheckResult r;
  r.kernel = kernel;
  r.trials = trials;
  SplitMix64 rng(derive_seed({seed, static_cast<std::uint64_t>(kernel)}));
  for (std::size_t t = 0; t < trials; ++t) {
    const bool sgn = t % 2 == 0;
    switch (kernel) {
      case CheckKernel::dot:
        sgn ? detail::dot_trial<std::int8_t>(rng, r, t) : detail::dot_trial<std::uint8_t>(rng, r, t);
        break;
      case CheckKernel::dense:
        sgn ? detail::dense_trial<std::int8_t>(rng, r, t) : detail::dense_trial<std::uint8_t>(rng, r, t);
        break;
      case CheckKernel::conv:
        sgn ? detail::conv_trial<std::int8_t>(rng, r, t) : detail::conv_trial<std::uint8_t>(rng, r, t);
        break;
      case CheckKernel::lstm:
        detail::lstm_trial(rng, r, t);
        break;
    }
  }
  return r;
}

}  // namespace hydrate::sacc
