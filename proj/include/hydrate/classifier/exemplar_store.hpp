#pragma once

// Class exemplars with their signed accumulators.
//
// Every mutating path (train, reconfigure_add_class, retrain_epoch) works on
// integer vote counts and bitwise majorities only; no gradient or floating
// point arithmetic is involved in building or updating exemplars.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hydrate/hdc/bundle.hpp"
#include "hydrate/hdc/hypervector.hpp"

namespace hydrate::classifier {

using hdc::Hypervector;
using ClassId = std::uint16_t;

struct LabeledVector {
  ClassId label = 0;
  Hypervector hv;
};

struct ClassEntry {
  std::optional<hdc::SignedAccumulator> accumulator;  // absent in inference-only stores
  Hypervector exemplar;
  std::uint32_t sample_count = 0;  // hypervectors added; subtractions do not decrement
};

class ExemplarStore {
 public:
  ExemplarStore(std::size_t dim, std::uint64_t tie_seed) : dim_(dim), tie_breaker_(tie_seed, dim) {}

  std::size_t dim() const noexcept { return dim_; }
  const hdc::TieBreaker& tie_breaker() const noexcept { return tie_breaker_; }
  bool empty() const noexcept { return classes_.empty(); }
  std::size_t size() const noexcept { return classes_.size(); }
  bool contains(ClassId id) const { return classes_.contains(id); }

  const std::map<ClassId, ClassEntry>& classes() const noexcept { return classes_; }
  const ClassEntry& at(ClassId id) const { return classes_.at(id); }
  const Hypervector& exemplar(ClassId id) const { return classes_.at(id).exemplar; }

  /// False once any class was loaded without its accumulator.
  bool trainable() const {
    for (const auto& [id, e] : classes_) {
      if (!e.accumulator) return false;
    }
    return true;
  }

  void require_dim(const Hypervector& h) const {
    if (h.dim() != dim_) {
      throw DimensionError("store dimension " + std::to_string(dim_) + " vs hypervector " + std::to_string(h.dim()));
    }
  }

  void require_trainable(ClassId id) const {
    auto it = classes_.find(id);
    if (it != classes_.end() && !it->second.accumulator) {
      throw StateError("class " + std::to_string(id) + " has no accumulator (inference-only store)");
    }
  }

  ClassEntry& entry_for_update(ClassId id) {
    auto [it, inserted] = classes_.try_emplace(id);
    if (inserted) {
      it->second.accumulator.emplace(dim_);
      it->second.exemplar = Hypervector(dim_);
    }
    return it->second;
  }

  void rebinarize(ClassId id) {
    auto& e = classes_.at(id);
    e.exemplar = hdc::binarize(*e.accumulator, tie_breaker_);
  }

  /// Installs a class as read from disk.
  void insert_loaded(ClassId id, ClassEntry entry) {
    if (!classes_.try_emplace(id, std::move(entry)).second) {
      throw ArgumentError("duplicate class id " + std::to_string(id));
    }
  }

 private:
  std::size_t dim_;
  hdc::TieBreaker tie_breaker_;
  std::map<ClassId, ClassEntry> classes_;
};

/// Adds every sample to its class accumulator, creating classes as needed,
/// then re-binarizes the touched classes.
inline void train(ExemplarStore& store, std::span<const LabeledVector> samples) {
  for (const auto& s : samples) {
    store.require_dim(s.hv);
    store.require_trainable(s.label);
  }
  std::map<ClassId, bool> touched;
  for (const auto& s : samples) {
    auto& e = store.entry_for_update(s.label);
    e.accumulator->add(s.hv);
    ++e.sample_count;
    touched[s.label] = true;
  }
  for (const auto& [id, _] : touched) store.rebinarize(id);
}

struct FrameDecision {
  ClassId class_id = 0;
  std::vector<std::pair<ClassId, std::size_t>> distances;  // ascending class id
};

/// Nearest exemplar by Hamming distance; ties go to the lowest class id.
inline FrameDecision classify_frame(const ExemplarStore& store, const Hypervector& h) {
  if (store.empty()) throw StateError("classify on an empty exemplar store");
  store.require_dim(h);
  FrameDecision out;
  out.distances.reserve(store.size());
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (const auto& [id, e] : store.classes()) {
    const auto d = hdc::hamming(h, e.exemplar);
    out.distances.emplace_back(id, d);
    if (d < best) {
      best = d;
      out.class_id = id;
    }
  }
  return out;
}

struct WindowConfig {
  std::size_t frames = 12;  // F
  std::size_t stride = 1;
};

struct WindowDecision {
  std::size_t start = 0;
  ClassId class_id = 0;
  std::vector<std::pair<ClassId, double>> mean_distances;  // ascending class id
};

/// Index of the smallest value, first occurrence wins.
template <typename T>
std::size_t argmin_first(std::span<const T> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[best]) best = i;
  }
  return best;
}

inline std::size_t window_count(std::size_t frames, const WindowConfig& cfg) {
  return frames < cfg.frames ? 0 : (frames - cfg.frames) / cfg.stride + 1;
}

/// Slides an F-frame window over per-frame distances and predicts the class
/// with the smallest mean Hamming distance inside each window.
inline std::vector<WindowDecision> classify_window(const ExemplarStore& store, std::span<const Hypervector> hs,
                                                   const WindowConfig& cfg) {
  if (cfg.frames == 0) throw ArgumentError("window length must be at least 1");
  if (cfg.stride == 0) throw ArgumentError("window stride must be positive");
  if (hs.size() < cfg.frames) {
    throw ArgumentError("sequence of " + std::to_string(hs.size()) + " frames is shorter than window " +
                        std::to_string(cfg.frames));
  }
  if (store.empty()) throw StateError("classify on an empty exemplar store");

  std::vector<ClassId> ids;
  std::vector<const Hypervector*> exemplars;
  for (const auto& [id, e] : store.classes()) {
    ids.push_back(id);
    exemplars.push_back(&e.exemplar);
  }
  const std::size_t nc = ids.size();
  std::vector<std::uint64_t> dist(hs.size() * nc);
  for (std::size_t t = 0; t < hs.size(); ++t) {
    store.require_dim(hs[t]);
    for (std::size_t c = 0; c < nc; ++c) dist[t * nc + c] = hdc::hamming(hs[t], *exemplars[c]);
  }

  const std::size_t n_windows = window_count(hs.size(), cfg);
  std::vector<WindowDecision> out;
  out.reserve(n_windows);
  std::vector<std::uint64_t> sums(nc);
  for (std::size_t w = 0; w < n_windows; ++w) {
    const std::size_t start = w * cfg.stride;
    std::fill(sums.begin(), sums.end(), 0);
    for (std::size_t t = start; t < start + cfg.frames; ++t) {
      for (std::size_t c = 0; c < nc; ++c) sums[c] += dist[t * nc + c];
    }
    // Integer sums order the same way as the means and compare exactly.
    WindowDecision d;
    d.start = start;
    d.class_id = ids[argmin_first<std::uint64_t>(sums)];
    d.mean_distances.reserve(nc);
    for (std::size_t c = 0; c < nc; ++c) {
      d.mean_distances.emplace_back(ids[c], static_cast<double>(sums[c]) / static_cast<double>(cfg.frames));
    }
    out.push_back(std::move(d));
  }
  return out;
}

/// Adds a class from forward-encoded shots. Existing exemplars are not touched.
inline void reconfigure_add_class(ExemplarStore& store, ClassId new_class, std::span<const Hypervector> shots) {
  if (store.contains(new_class)) throw ArgumentError("class " + std::to_string(new_class) + " already exists");
  if (shots.empty()) throw ArgumentError("reconfiguration needs at least one shot");
  for (const auto& h : shots) store.require_dim(h);
  auto& e = store.entry_for_update(new_class);
  for (const auto& h : shots) {
    e.accumulator->add(h);
    ++e.sample_count;
  }
  store.rebinarize(new_class);
}

/// One pass over the data. Each misclassified sample is added to its true
/// class and subtracted from the predicted one; both exemplars are
/// re-binarized before the next sample is examined. Returns the number of
/// mismatches seen during the pass.
inline std::size_t retrain_epoch(ExemplarStore& store, std::span<const LabeledVector> samples) {
  if (store.empty()) throw StateError("retrain on an untrained store");
  for (const auto& s : samples) {
    if (!store.contains(s.label)) throw ArgumentError("unknown label " + std::to_string(s.label));
    store.require_dim(s.hv);
  }
  if (!store.trainable()) throw StateError("store has no accumulators (inference-only)");

  std::size_t mismatches = 0;
  for (const auto& s : samples) {
    const auto predicted = classify_frame(store, s.hv).class_id;
    if (predicted == s.label) continue;
    ++mismatches;
    auto& truth = store.entry_for_update(s.label);
    truth.accumulator->add(s.hv);
    ++truth.sample_count;
    auto& wrong = store.entry_for_update(predicted);
    wrong.accumulator->sub(s.hv);
    store.rebinarize(s.label);
    store.rebinarize(predicted);
  }
  return mismatches;
}

/// Fraction of samples whose nearest exemplar is not their label.
inline double frame_error_rate(const ExemplarStore& store, std::span<const LabeledVector> samples) {
  if (samples.empty()) return 0.0;
  std::size_t wrong = 0;
  for (const auto& s : samples) wrong += classify_frame(store, s.hv).class_id != s.label;
  return static_cast<double>(wrong) / static_cast<double>(samples.size());
}

}  // namespace hydrate::classifier
