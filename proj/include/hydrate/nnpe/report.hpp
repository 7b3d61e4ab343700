#pragma once

// CSV and text rendering of the NNPE traffic and latency reports.

#include <cstdio>
#include <string>
#include <utility>

#include "hydrate/nnpe/model.hpp"

namespace hydrate::nnpe {

inline constexpr double kBitsPerMbit = 1e6;

struct ComparisonReport {
  NNPEConfig sacc_cfg;
  NNPEConfig mac_cfg;
  TrafficReport sacc;
  TrafficReport mac;
  LatencyReport latency;  // for sacc_cfg

  double saving_ratio() const { return sacc.total() > 0 ? mac.total() / sacc.total() : 0.0; }
};

inline ComparisonReport compare(const LayerManifest& m, const NNPEConfig& cfg) {
  ComparisonReport r;
  r.sacc_cfg = cfg;
  r.mac_cfg = mac_baseline(cfg);
  r.sacc = traffic(m, r.sacc_cfg);
  r.mac = traffic(m, r.mac_cfg);
  r.latency = latency(m, r.sacc_cfg);
  return r;
}

namespace detail {

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

inline std::string mbit(double bits) { return fmt("%.6f", bits / kBitsPerMbit); }

}  // namespace detail

/// CSV rows, in output order.
inline std::pair<const char*, double TrafficCategories::*> const kTrafficRows[] = {
    {"image_from_mem", &TrafficCategories::image_in},
    {"layers_from_mem", &TrafficCategories::layers_from_mem},
    {"layers_to_mem", &TrafficCategories::layers_to_mem},
    {"scratch_to_mem", &TrafficCategories::scratch_to_mem},
    {"scratch_from_mem", &TrafficCategories::scratch_from_mem},
    {"parameters_from_mem", &TrafficCategories::parameters_from_mem},
};

/// Columns: category, sacc_mbit, sacc_saved_mbit, mac_mbit, mac_saved_mbit.
/// Six category rows, a total row, then bw_saving_ratio: MAC total over
/// SACC total, and in the saved column the same ratio with the SACC
/// embedded-buffer savings added back.
inline std::string traffic_csv(const ComparisonReport& r) {
  using detail::mbit;
  std::string out = "category,sacc_mbit,sacc_saved_mbit,mac_mbit,mac_saved_mbit\n";
  for (const auto& [name, field] : kTrafficRows) {
    out += std::string(name) + ',' + mbit(r.sacc.traffic.*field) + ',' + mbit(r.sacc.saved.*field) + ',' +
           mbit(r.mac.traffic.*field) + ',' + mbit(r.mac.saved.*field) + '\n';
  }
  out += "total," + mbit(r.sacc.traffic.total()) + ',' + mbit(r.sacc.saved.total()) + ',' + mbit(r.mac.traffic.total()) +
         ',' + mbit(r.mac.saved.total()) + '\n';
  const double unbuffered = r.sacc.traffic.total() + r.sacc.saved.total();
  out += "bw_saving_ratio," + detail::fmt("%.6f", r.saving_ratio()) + ',' +
         detail::fmt("%.6f", unbuffered > 0 ? r.mac.total() / unbuffered : 0.0) + ",1.000000,1.000000\n";
  return out;
}

/// Columns: layer, kind, cycles, compute_ms, memory_ms, time_ms, followed
/// by summary rows whose layer field names the quantity.
inline std::string latency_csv(const LayerManifest& m, const LatencyReport& r) {
  std::string out = "layer,kind,cycles,compute_ms,memory_ms,time_ms\n";
  for (std::size_t i = 0; i < r.layers.size(); ++i) {
    const auto& l = r.layers[i];
    out += std::to_string(i) + ',' + std::string(to_string(m[i].kind)) + ',' + std::to_string(l.cycles) + ',' +
           detail::fmt("%.6f", l.compute_s * 1e3) + ',' + detail::fmt("%.6f", l.memory_s * 1e3) + ',' +
           detail::fmt("%.6f", l.time_s * 1e3) + '\n';
  }
  const auto row = [&](const char* name, double s) { out += std::string(name) + ",summary,," + ",," + detail::fmt("%.6f", s * 1e3) + '\n'; };
  row("feature_stack", r.feature_stack_s);
  row("feature_compute_only", r.feature_compute_s);
  row("recurrent_step", r.recurrent_step_s);
  row("sequential_total", r.sequential_s);
  row("overlapped_total", r.overlapped_s);
  row("compute_only_total", r.compute_only_s);
  row("total", r.total_s);
  return out;
}

inline std::string summary_text(const ComparisonReport& r) {
  std::string s;
  s += "config: S=" + std::to_string(r.sacc_cfg.arrays) + " N=" + std::to_string(r.sacc_cfg.lanes) +
       " clock_mhz=" + detail::fmt("%.3f", r.sacc_cfg.clock_hz / 1e6) +
       " weight_bits=" + std::to_string(r.sacc_cfg.weight_bits) + " act_bits=" + std::to_string(r.sacc_cfg.act_bits) +
       " policy=" + std::string(to_string(r.sacc_cfg.policy)) + '\n';
  s += "traffic sacc " + detail::mbit(r.sacc.total()) + " Mbit, mac " + detail::mbit(r.mac.total()) +
       " Mbit, ratio " + detail::fmt("%.3f", r.saving_ratio()) + '\n';
  s += "latency feature " + detail::fmt("%.3f", r.latency.feature_stack_s * 1e3) + " ms (compute only " +
       detail::fmt("%.3f", r.latency.feature_compute_s * 1e3) + " ms), recurrent step " +
       detail::fmt("%.3f", r.latency.recurrent_step_s * 1e3) + " ms, total " +
       detail::fmt("%.3f", r.latency.total_s * 1e3) + " ms\n";
  return s;
}

}  // namespace hydrate::nnpe
