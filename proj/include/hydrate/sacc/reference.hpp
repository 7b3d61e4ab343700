#pragma once

// Multiply-accumulate reference kernels. They decode each weight to an
// integer and multiply, with loop orders independent of the SACC kernels,
// and serve as the equivalence oracle for tests and `sacc-check`.

#include <cstdint>
#include <span>
#include <vector>

#include "hydrate/sacc/kernels.hpp"

namespace hydrate::sacc::reference {

template <Activation8 T>
std::int64_t mac_dot(std::span<const T> x, std::span<const PoTCode> w) {
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += static_cast<std::int64_t>(x[i]) * w[i].decode();
  return acc;
}

template <Activation8 T>
std::vector<std::int64_t> mac_dense(std::span<const T> x, const PoTTensor& w) {
  const auto out_n = w.shape()[0];
  const auto in_n = w.shape()[1];
  std::vector<std::int64_t> out(out_n, 0);
  auto codes = w.codes();
  // Input-major traversal, the transpose of the SACC row order.
  for (std::size_t i = 0; i < in_n; ++i) {
    for (std::size_t o = 0; o < out_n; ++o) out[o] += static_cast<std::int64_t>(x[i]) * codes[o * in_n + i].decode();
  }
  return out;
}

/// Direct convolution over output channels outermost, no patch gathering.
template <Activation8 T>
std::vector<std::int64_t> mac_conv2d(const QuantActivation<T>& input, const PoTTensor& w, std::size_t stride,
                                     std::size_t pad) {
  const std::size_t H = input.shape[0], W = input.shape[1], C = input.shape[2];
  const std::size_t c_out = w.shape()[0], k = w.shape()[1];
  const std::size_t h_out = (H + 2 * pad - k) / stride + 1;
  const std::size_t w_out = (W + 2 * pad - k) / stride + 1;
  std::vector<std::int64_t> out(h_out * w_out * c_out, 0);
  auto codes = w.codes();
  for (std::size_t co = 0; co < c_out; ++co) {
    for (std::size_t ci = 0; ci < C; ++ci) {
      for (std::size_t ky = 0; ky < k; ++ky) {
        for (std::size_t kx = 0; kx < k; ++kx) {
          const std::int64_t wv = codes[((co * k + ky) * k + kx) * C + ci].decode();
          if (wv == 0) continue;
          for (std::size_t oy = 0; oy < h_out; ++oy) {
            const long iy = static_cast<long>(oy * stride + ky) - static_cast<long>(pad);
            if (iy < 0 || iy >= static_cast<long>(H)) continue;
            for (std::size_t ox = 0; ox < w_out; ++ox) {
              const long ix = static_cast<long>(ox * stride + kx) - static_cast<long>(pad);
              if (ix < 0 || ix >= static_cast<long>(W)) continue;
              out[(oy * w_out + ox) * c_out + co] +=
                  wv * static_cast<std::int64_t>(input.values[(static_cast<std::size_t>(iy) * W + static_cast<std::size_t>(ix)) * C + ci]);
            }
          }
        }
      }
    }
  }
  return out;
}

}  // namespace hydrate::sacc::reference
