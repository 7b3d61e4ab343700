#pragma once

// Analytical model of the shift-accumulate processing engine (NNPE):
// S arrays of N SACC lanes sharing one input stream, swappable on-chip
// data buffers, and DMA traffic to external memory.

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hydrate/error.hpp"

namespace hydrate::nnpe {

enum class LayerKind { conv, dense, lstm_gate };
enum class BufferPolicy { none, two_buffer, three_buffer };

inline std::string_view to_string(LayerKind k) {
  switch (k) {
    case LayerKind::conv: return "conv";
    case LayerKind::dense: return "dense";
    case LayerKind::lstm_gate: return "lstm_gate";
  }
  return "?";
}

inline std::string_view to_string(BufferPolicy p) {
  switch (p) {
    case BufferPolicy::none: return "none";
    case BufferPolicy::two_buffer: return "two_buffer";
    case BufferPolicy::three_buffer: return "three_buffer";
  }
  return "?";
}

inline BufferPolicy parse_policy(std::string_view s) {
  if (s == "none") return BufferPolicy::none;
  if (s == "two_buffer") return BufferPolicy::two_buffer;
  if (s == "three_buffer") return BufferPolicy::three_buffer;
  throw ArgumentError("unknown buffer policy '" + std::string(s) + "'");
}

struct NNPEConfig {
  std::size_t arrays = 8;    // S
  std::size_t lanes = 256;   // N
  double clock_hz = 187.5e6;
  int weight_bits = 4;
  int act_bits = 8;
  int image_bits = 8;
  BufferPolicy policy = BufferPolicy::two_buffer;
  std::uint64_t buffer_capacity_bits = 8ull << 20;  // per data buffer
  double bandwidth_bits_per_s = 19.2e9 * 8;         // one 64-bit DDR4-2400 channel
  double dma_efficiency = 1.0;
  std::uint64_t layer_overhead_cycles = 0;
  std::size_t recurrent_steps = 12;
  bool overlap_recurrent = true;  // run all but the last recurrent step alongside the feature stack

  void validate() const {
    if (arrays == 0 || lanes == 0) throw ConfigError("NNPE needs S >= 1 and N >= 1");
    if (!(clock_hz > 0.0)) throw ConfigError("clock must be positive");
    if (weight_bits <= 0 || act_bits <= 0 || image_bits <= 0) throw ConfigError("bit widths must be positive");
    if (!(dma_efficiency > 0.0 && dma_efficiency <= 1.0)) throw ConfigError("dma_efficiency must lie in (0, 1]");
    if (!(bandwidth_bits_per_s > 0.0)) throw ConfigError("bandwidth must be positive");
    if (recurrent_steps == 0) throw ConfigError("recurrent_steps must be at least 1");
  }
};

/// Baseline used for the bandwidth comparison: 32-bit weights and
/// activations, every intermediate spilled.
inline NNPEConfig mac_baseline(NNPEConfig cfg) {
  cfg.weight_bits = 32;
  cfg.act_bits = 32;
  cfg.policy = BufferPolicy::none;
  return cfg;
}

struct Layer {
  LayerKind kind = LayerKind::conv;
  std::size_t k = 1;
  std::size_t c_in = 1;
  std::size_t c_out = 1;
  std::size_t h_out = 1;
  std::size_t w_out = 1;
  std::size_t stride = 1;
  bool resident = false;  // output is a residual intermediate consumed later

  std::uint64_t weight_count() const noexcept { return std::uint64_t{k} * k * c_in * c_out; }
  std::uint64_t input_elements() const noexcept { return std::uint64_t{h_out} * stride * w_out * stride * c_in; }
  std::uint64_t output_elements() const noexcept { return std::uint64_t{h_out} * w_out * c_out; }
  bool recurrent() const noexcept { return kind == LayerKind::lstm_gate; }

  void validate() const {
    if (k == 0 || c_in == 0 || c_out == 0 || h_out == 0 || w_out == 0 || stride == 0) {
      throw ConfigError("layer dimensions must be positive");
    }
  }

  friend bool operator==(const Layer&, const Layer&) = default;
};

using LayerManifest = std::vector<Layer>;

inline std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

/// H_out * W_out * ceil(C_out / S) * ceil(k^2 C_in / N). A dense or LSTM
/// gate layer is a 1x1 convolution on a 1x1 map.
inline std::uint64_t cycles_for_layer(const Layer& l, const NNPEConfig& cfg) {
  l.validate();
  return std::uint64_t{l.h_out} * l.w_out * ceil_div(l.c_out, cfg.arrays) * ceil_div(std::uint64_t{l.k} * l.k * l.c_in, cfg.lanes);
}

/// External-memory traffic in bits, one field per reporting category.
struct TrafficCategories {
  double image_in = 0;
  double layers_from_mem = 0;
  double layers_to_mem = 0;
  double scratch_to_mem = 0;
  double scratch_from_mem = 0;
  double parameters_from_mem = 0;

  double total() const noexcept {
    return image_in + layers_from_mem + layers_to_mem + scratch_to_mem + scratch_from_mem + parameters_from_mem;
  }

  TrafficCategories& operator+=(const TrafficCategories& o) noexcept {
    image_in += o.image_in;
    layers_from_mem += o.layers_from_mem;
    layers_to_mem += o.layers_to_mem;
    scratch_to_mem += o.scratch_to_mem;
    scratch_from_mem += o.scratch_from_mem;
    parameters_from_mem += o.parameters_from_mem;
    return *this;
  }

  friend TrafficCategories operator-(TrafficCategories a, const TrafficCategories& b) noexcept {
    a.image_in -= b.image_in;
    a.layers_from_mem -= b.layers_from_mem;
    a.layers_to_mem -= b.layers_to_mem;
    a.scratch_to_mem -= b.scratch_to_mem;
    a.scratch_from_mem -= b.scratch_from_mem;
    a.parameters_from_mem -= b.parameters_from_mem;
    return a;
  }
};

struct TrafficReport {
  TrafficCategories traffic;
  TrafficCategories saved;  // relative to the same bit widths with no embedded buffers
  double total() const noexcept { return traffic.total(); }
};

/// Traffic attributed to each layer under the configured policy.
///
///  none         every layer input (after the image) is read and every
///               output written; residual outputs also go to scratch.
///  two_buffer   ping-pong data stays on chip while a tensor fits one
///               buffer; residual outputs still spill to scratch.
///  three_buffer as two_buffer, and residual outputs that fit stay in the
///               third buffer.
/// The last layer's output is always written back.
inline std::vector<TrafficCategories> layer_traffic(const LayerManifest& m, const NNPEConfig& cfg) {
  cfg.validate();
  std::vector<TrafficCategories> out(m.size());
  const auto act = static_cast<double>(cfg.act_bits);
  const auto cap = cfg.buffer_capacity_bits;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Layer& l = m[i];
    l.validate();
    auto& t = out[i];
    const std::uint64_t in_bits = l.input_elements() * static_cast<std::uint64_t>(cfg.act_bits);
    const std::uint64_t out_bits = l.output_elements() * static_cast<std::uint64_t>(cfg.act_bits);
    const bool last = i + 1 == m.size();

    if (i == 0) {
      t.image_in = static_cast<double>(l.input_elements()) * cfg.image_bits;
    } else if (cfg.policy == BufferPolicy::none || in_bits > cap) {
      t.layers_from_mem = static_cast<double>(l.input_elements()) * act;
    }
    if (last || cfg.policy == BufferPolicy::none || out_bits > cap) {
      t.layers_to_mem = static_cast<double>(l.output_elements()) * act;
    }
    if (l.resident) {
      const bool kept = cfg.policy == BufferPolicy::three_buffer && out_bits <= cap;
      if (!kept) {
        t.scratch_to_mem = static_cast<double>(l.output_elements()) * act;
        t.scratch_from_mem = t.scratch_to_mem;
      }
    }
    t.parameters_from_mem = static_cast<double>(l.weight_count()) * cfg.weight_bits;
  }
  return out;
}

inline TrafficReport traffic(const LayerManifest& m, const NNPEConfig& cfg) {
  TrafficReport r;
  for (const auto& t : layer_traffic(m, cfg)) r.traffic += t;
  NNPEConfig unbuffered = cfg;
  unbuffered.policy = BufferPolicy::none;
  TrafficCategories none_total;
  for (const auto& t : layer_traffic(m, unbuffered)) none_total += t;
  r.saved = none_total - r.traffic;
  return r;
}

struct LayerLatency {
  std::uint64_t cycles = 0;
  double compute_s = 0;
  double memory_s = 0;
  double time_s = 0;  // max(compute, memory)
};

struct LatencyReport {
  std::vector<LayerLatency> layers;
  double feature_stack_s = 0;         // conv / dense layers, one frame
  double feature_compute_s = 0;       // same, compute only
  double recurrent_step_s = 0;        // lstm_gate layers, one step
  double recurrent_step_compute_s = 0;
  double sequential_s = 0;            // feature + steps * recurrent
  double overlapped_s = 0;            // max(feature, (steps-1) * recurrent) + recurrent
  double compute_only_s = 0;          // lower bound under the configured composition
  double total_s = 0;
};

inline double compose(double feature, double step, std::size_t steps, bool overlap) {
  if (step == 0.0) return feature;
  if (!overlap) return feature + static_cast<double>(steps) * step;
  return std::max(feature, static_cast<double>(steps - 1) * step) + step;
}

inline LatencyReport latency(const LayerManifest& m, const NNPEConfig& cfg) {
  cfg.validate();
  const auto traffic_per_layer = layer_traffic(m, cfg);
  LatencyReport r;
  r.layers.reserve(m.size());
  const double bw = cfg.bandwidth_bits_per_s * cfg.dma_efficiency;
  for (std::size_t i = 0; i < m.size(); ++i) {
    LayerLatency ll;
    ll.cycles = cycles_for_layer(m[i], cfg) + cfg.layer_overhead_cycles;
    ll.compute_s = static_cast<double>(ll.cycles) / cfg.clock_hz;
    ll.memory_s = traffic_per_layer[i].total() / bw;
    ll.time_s = std::max(ll.compute_s, ll.memory_s);
    if (m[i].recurrent()) {
      r.recurrent_step_s += ll.time_s;
      r.recurrent_step_compute_s += ll.compute_s;
    } else {
      r.feature_stack_s += ll.time_s;
      r.feature_compute_s += ll.compute_s;
    }
    r.layers.push_back(ll);
  }
  r.sequential_s = compose(r.feature_stack_s, r.recurrent_step_s, cfg.recurrent_steps, false);
  r.overlapped_s = compose(r.feature_stack_s, r.recurrent_step_s, cfg.recurrent_steps, true);
  r.compute_only_s = compose(r.feature_compute_s, r.recurrent_step_compute_s, cfg.recurrent_steps, cfg.overlap_recurrent);
  r.total_s = cfg.overlap_recurrent ? r.overlapped_s : r.sequential_s;
  return r;
}

}  // namespace hydrate::nnpe
