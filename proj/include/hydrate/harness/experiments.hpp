#pragma once

// Encode -> train -> evaluate pipeline and the parameter sweeps built on it.
//
// Trial t of a sweep uses task seed spec.seed + t and HD seed
// pipe.hd_seed + t. Corruption seeds are derived from (corrupt_seed, t) and
// reused across the sweep values of one trial.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hydrate/classifier/evaluate.hpp"
#include "hydrate/classifier/exemplar_store.hpp"
#include "hydrate/encoder/item_memory.hpp"
#include "hydrate/harness/synthetic.hpp"

namespace hydrate::harness {

using classifier::ClassId;
using classifier::EncodedClip;
using classifier::EvalResult;
using classifier::ExemplarStore;
using classifier::LabeledVector;
using classifier::WindowConfig;

struct PipelineConfig {
  std::size_t dim = 4096;
  std::size_t levels = 256;
  WindowConfig window{};
  std::uint64_t hd_seed = 1;
};

struct HdContext {
  encoder::ItemMemory im;
  hdc::TieBreaker tb;

  HdContext(std::size_t features, const PipelineConfig& cfg, std::uint64_t seed)
      : im(seed, cfg.dim, features, cfg.levels), tb(seed, cfg.dim) {}
};

inline std::vector<EncodedClip> encode_set(const FeatureSet& set, const HdContext& ctx) {
  std::vector<EncodedClip> out;
  out.reserve(set.clips.size());
  for (const auto& clip : set.clips) out.push_back({clip.label, encoder::encode_sequence(clip, ctx.im, ctx.tb)});
  return out;
}

/// Every frame of every clip, labelled with its clip's class.
inline std::vector<LabeledVector> labeled_frames(std::span<const EncodedClip> clips,
                                                 std::optional<ClassId> exclude = std::nullopt) {
  std::vector<LabeledVector> out;
  for (const auto& c : clips) {
    if (exclude && c.label == *exclude) continue;
    for (const auto& h : c.frames) out.push_back({c.label, h});
  }
  return out;
}

inline ExemplarStore train_store(std::span<const EncodedClip> clips, std::size_t dim, std::uint64_t tie_seed,
                                 std::optional<ClassId> exclude = std::nullopt) {
  ExemplarStore store(dim, tie_seed);
  const auto samples = labeled_frames(clips, exclude);
  classifier::train(store, samples);
  return store;
}

/// Query-side bit flips: frame t of clip i uses seed derive(seed, i, t).
inline std::vector<EncodedClip> flip_queries(std::span<const EncodedClip> clips, double p, std::uint64_t seed) {
  std::vector<EncodedClip> out(clips.begin(), clips.end());
  if (p == 0.0) return out;
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t t = 0; t < out[i].frames.size(); ++t) {
      out[i].frames[t] = flip_bits(out[i].frames[t], p, derive_seed({seed, i, t}));
    }
  }
  return out;
}

/// First k clips of `label`, frames concatenated in clip order.
inline std::vector<hdc::Hypervector> shots_of(std::span<const EncodedClip> clips, ClassId label, std::size_t k) {
  std::vector<hdc::Hypervector> out;
  std::size_t taken = 0;
  for (const auto& c : clips) {
    if (c.label != label) continue;
    if (taken == k) break;
    out.insert(out.end(), c.frames.begin(), c.frames.end());
    ++taken;
  }
  if (taken < k) {
    throw ArgumentError("class " + std::to_string(label) + " has " + std::to_string(taken) + " clips, " +
                        std::to_string(k) + " shots requested");
  }
  return out;
}

struct TrialSeeds {
  std::uint64_t task;
  std::uint64_t hd;
};

inline TrialSeeds trial_seeds(const SyntheticTaskSpec& spec, const PipelineConfig& pipe, std::size_t trial) {
  return {spec.seed + trial, pipe.hd_seed + trial};
}

/// Result of a single clean train/evaluate pass.
inline EvalResult run_trial(const SyntheticTaskSpec& spec, const PipelineConfig& pipe, std::size_t trial = 0) {
  const auto seeds = trial_seeds(spec, pipe, trial);
  auto s = spec;
  s.seed = seeds.task;
  const auto task = gen_synthetic(s);
  const HdContext ctx(spec.features, pipe, seeds.hd);
  const auto train = encode_set(task.train, ctx);
  const auto test = encode_set(task.test, ctx);
  const auto store = train_store(train, pipe.dim, seeds.hd);
  return classifier::evaluate(store, test, pipe.window);
}

// ---------------------------------------------------------------------------
// Reports

struct RunReport {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  /// "# key=value" echo lines, then a header and one line per row.
  std::string to_csv() const {
    std::string out = "# experiment=" + experiment + '\n';
    for (const auto& [k, v] : config) out += "# " + k + '=' + v + '\n';
    const auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
      }
      out += '\n';
    };
    line(columns);
    for (const auto& r : rows) line(r);
    return out;
  }

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return i;
    }
    throw ArgumentError("report has no column '" + name + "'");
  }

  double value(std::size_t row, const std::string& name) const { return std::stod(rows.at(row).at(column(name))); }
};

inline std::string fmt_double(double v, const char* f = "%.6f") {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct Stats {
  double mean = 0, stddev = 0, min = 0, max = 0;
};

inline Stats summarize(std::span<const double> xs) {
  Stats s;
  if (xs.empty()) return s;
  s.min = *std::min_element(xs.begin(), xs.end());
  s.max = *std::max_element(xs.begin(), xs.end());
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

inline std::vector<std::pair<std::string, std::string>> echo_config(const SyntheticTaskSpec& spec,
                                                                    const PipelineConfig& pipe, std::size_t trials) {
  return {
      {"seed", std::to_string(spec.seed)},
      {"hd_seed", std::to_string(pipe.hd_seed)},
      {"trials", std::to_string(trials)},
      {"classes", std::to_string(spec.num_classes)},
      {"features", std::to_string(spec.features)},
      {"frames_per_clip", std::to_string(spec.frames_per_clip)},
      {"train_clips_per_class", std::to_string(spec.train_clips_per_class)},
      {"test_clips_per_class", std::to_string(spec.test_clips_per_class)},
      {"sigma", fmt_double(spec.sigma)},
      {"clip_sigma", fmt_double(spec.clip_sigma)},
      {"active_dims", std::to_string(spec.active_dims)},
      {"separation", std::to_string(spec.separation)},
      {"base_lo", std::to_string(spec.base_lo)},
      {"base_hi", std::to_string(spec.base_hi)},
      {"dim", std::to_string(pipe.dim)},
      {"levels", std::to_string(pipe.levels)},
      {"window_frames", std::to_string(pipe.window.frames)},
      {"window_stride", std::to_string(pipe.window.stride)},
  };
}

inline std::vector<std::string> stat_cells(std::span<const double> xs) {
  const auto s = summarize(xs);
  return {fmt_double(s.mean), fmt_double(s.stddev), fmt_double(s.min), fmt_double(s.max)};
}

inline const std::vector<std::string> kStatColumns = {"mean_accuracy", "std_accuracy", "min_accuracy", "max_accuracy"};

inline std::vector<std::string> with_stats(std::vector<std::string> head) {
  head.insert(head.end(), kStatColumns.begin(), kStatColumns.end());
  return head;
}

inline void check_trials(std::size_t trials) {
  if (trials == 0) throw ArgumentError("trials must be at least 1");
}

// ---------------------------------------------------------------------------
// Sweeps

inline RunReport sweep_dim(const SyntheticTaskSpec& spec, const PipelineConfig& pipe, std::span<const std::size_t> dims,
                           std::size_t trials) {
  check_trials(trials);
  for (auto d : dims) hdc::check_dim(d);
  RunReport r{"sweep-dim", echo_config(spec, pipe, trials), with_stats({"dim", "trials"}), {}};
  r.config.emplace_back("dims", [&] {
    std::string s;
    for (auto d : dims) s += (s.empty() ? "" : ";") + std::to_string(d);
    return s;
  }());
  std::vector<std::vector<double>> acc(dims.size());
  for (std::size_t t = 0; t < trials; ++t) {
    const auto seeds = trial_seeds(spec, pipe, t);
    auto s = spec;
    s.seed = seeds.task;
    const auto task = gen_synthetic(s);
    for (std::size_t i = 0; i < dims.size(); ++i) {
      auto p = pipe;
      p.dim = dims[i];
      const HdContext ctx(spec.features, p, seeds.hd);
      const auto train = encode_set(task.train, ctx);
      const auto test = encode_set(task.test, ctx);
      const auto store = train_store(train, p.dim, seeds.hd);
      acc[i].push_back(classifier::evaluate(store, test, p.window).accuracy());
    }
  }
  for (std::size_t i = 0; i < dims.size(); ++i) {
    auto row = std::vector<std::string>{std::to_string(dims[i]), std::to_string(trials)};
    auto st = stat_cells(acc[i]);
    row.insert(row.end(), st.begin(), st.end());
    r.rows.push_back(std::move(row));
  }
  return r;
}

/// Noise is added to the test features only; +inf means clean.
inline RunReport sweep_noise(const SyntheticTaskSpec& spec, const PipelineConfig& pipe, std::span<const double> snr_db,
                             std::size_t trials, std::uint64_t noise_seed) {
  check_trials(trials);
  RunReport r{"sweep-noise", echo_config(spec, pipe, trials), with_stats({"snr_db", "trials"}), {}};
  r.config.emplace_back("noise_seed", std::to_string(noise_seed));
  std::vector<std::vector<double>> acc(snr_db.size());
  for (std::size_t t = 0; t < trials; ++t) {
    const auto seeds = trial_seeds(spec, pipe, t);
    auto s = spec;
    s.seed = seeds.task;
    const auto task = gen_synthetic(s);
    const HdContext ctx(spec.features, pipe, seeds.hd);
    const auto store = train_store(encode_set(task.train, ctx), pipe.dim, seeds.hd);
    for (std::size_t i = 0; i < snr_db.size(); ++i) {
      const auto noisy = add_gaussian_noise(task.test, snr_db[i], derive_seed({noise_seed, t}));
      acc[i].push_back(classifier::evaluate(store, encode_set(noisy, ctx), pipe.window).accuracy());
    }
  }
  for (std::size_t i = 0; i < snr_db.size(); ++i) {
    auto row = std::vector<std::string>{fmt_double(snr_db[i], "%g"), std::to_string(trials)};
    auto st = stat_cells(acc[i]);
    row.insert(row.end(), st.begin(), st.end());
    r.rows.push_back(std::move(row));
  }
  return r;
}

/// Bits are flipped in the encoded test queries only; exemplars stay clean.
inline RunReport sweep_bitflip(const SyntheticTaskSpec& spec, const PipelineConfig& pipe, std::span<const double> ps,
                               std::size_t trials, std::uint64_t flip_seed) {
  check_trials(trials);
  RunReport r{"sweep-bitflip", echo_config(spec, pipe, trials), with_stats({"p", "trials"}), {}};
  r.config.emplace_back("flip_seed", std::to_string(flip_seed));
  std::vector<std::vector<double>> acc(ps.size());
  for (std::size_t t = 0; t < trials; ++t) {
    const auto seeds = trial_seeds(spec, pipe, t);
    auto s = spec;
    s.seed = seeds.task;
    const auto task = gen_synthetic(s);
    const HdContext ctx(spec.features, pipe, seeds.hd);
    const auto store = train_store(encode_set(task.train, ctx), pipe.dim, seeds.hd);
    const auto test = encode_set(task.test, ctx);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const auto flipped = flip_queries(test, ps[i], derive_seed({flip_seed, t}));
      acc[i].push_back(classifier::evaluate(store, flipped, pipe.window).accuracy());
    }
  }
  for (std::size_t i = 0; i < ps.size(); ++i) {
    auto row = std::vector<std::string>{fmt_double(ps[i], "%g"), std::to_string(trials)};
    auto st = stat_cells(acc[i]);
    row.insert(row.end(), st.begin(), st.end());
    r.rows.push_back(std::move(row));
  }
  return r;
}

/// One k-shot measurement against a base store trained without `held_out`.
struct KShotPoint {
  double new_class_accuracy = 0;
  double old_class_accuracy = 0;
  double base_old_class_accuracy = 0;
  bool old_exemplars_unchanged = true;
};

inline KShotPoint kshot_point(const ExemplarStore& base, std::span<const EncodedClip> train,
                              std::span<const EncodedClip> test, ClassId held_out, std::size_t k,
                              const WindowConfig& window) {
  const auto is_old = [&](ClassId id) { return id != held_out; };
  KShotPoint p;
  {
    std::vector<EncodedClip> old_test;
    for (const auto& c : test) {
      if (is_old(c.label)) old_test.push_back(c);
    }
    p.base_old_class_accuracy = classifier::evaluate(base, old_test, window).accuracy();
  }
  ExemplarStore store = base;
  classifier::reconfigure_add_class(store, held_out, shots_of(train, held_out, k));
  for (const auto& [id, e] : base.classes()) {
    if (!(store.exemplar(id) == e.exemplar)) p.old_exemplars_unchanged = false;
  }
  const auto res = classifier::evaluate(store, test, window);
  p.new_class_accuracy = res.accuracy_where([&](ClassId id) { return id == held_out; });
  p.old_class_accuracy = res.accuracy_where(is_old);
  return p;
}

inline RunReport sweep_kshot(const SyntheticTaskSpec& spec, const PipelineConfig& pipe, ClassId held_out,
                             std::span<const std::size_t> ks, std::size_t trials) {
  check_trials(trials);
  if (held_out >= spec.num_classes) throw ArgumentError("held-out class is not part of the task");
  for (auto k : ks) {
    if (k == 0 || k > spec.train_clips_per_class) throw ArgumentError("k must lie in [1, train clips per class]");
  }
  RunReport r{"sweep-kshot",
              echo_config(spec, pipe, trials),
              {"k", "trials", "new_class_accuracy", "old_class_accuracy", "base_old_class_accuracy", "old_class_drop",
               "old_exemplars_unchanged"},
              {}};
  r.config.emplace_back("held_out", std::to_string(held_out));
  std::vector<std::vector<KShotPoint>> pts(ks.size());
  for (std::size_t t = 0; t < trials; ++t) {
    const auto seeds = trial_seeds(spec, pipe, t);
    auto s = spec;
    s.seed = seeds.task;
    const auto task = gen_synthetic(s);
    const HdContext ctx(spec.features, pipe, seeds.hd);
    const auto train = encode_set(task.train, ctx);
    const auto test = encode_set(task.test, ctx);
    const auto base = train_store(train, pipe.dim, seeds.hd, held_out);
    for (std::size_t i = 0; i < ks.size(); ++i) pts[i].push_back(kshot_point(base, train, test, held_out, ks[i], pipe.window));
  }
  for (std::size_t i = 0; i < ks.size(); ++i) {
    double nw = 0, old = 0, base_old = 0;
    bool unchanged = true;
    for (const auto& p : pts[i]) {
      nw += p.new_class_accuracy;
      old += p.old_class_accuracy;
      base_old += p.base_old_class_accuracy;
      unchanged = unchanged && p.old_exemplars_unchanged;
    }
    const auto n = static_cast<double>(pts[i].size());
    r.rows.push_back({std::to_string(ks[i]), std::to_string(trials), fmt_double(nw / n), fmt_double(old / n),
                      fmt_double(base_old / n), fmt_double((base_old - old) / n), unchanged ? "1" : "0"});
  }
  return r;
}

}  // namespace hydrate::harness
