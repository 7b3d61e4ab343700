#pragma once

#include <map>
#include <span>
#include <vector>

#include "hydrate/classifier/exemplar_store.hpp"

namespace hydrate::classifier {

struct EncodedClip {
  ClassId label = 0;
  std::vector<Hypervector> frames;
};

struct ClassTally {
  std::size_t total = 0;
  std::size_t correct = 0;

  double accuracy() const noexcept { return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total); }
};

struct ClipPrediction {
  ClassId truth = 0;
  ClassId predicted = 0;
  std::size_t windows = 0;
  std::size_t votes = 0;  // windows agreeing with `predicted`
};

/// Clip-level evaluation. A class with no test clips has no row in
/// `per_class` or `confusion`.
struct EvalResult {
  std::size_t clips = 0;
  std::size_t correct = 0;
  std::map<ClassId, ClassTally> per_class;
  std::map<ClassId, std::map<ClassId, std::size_t>> confusion;  // truth -> predicted -> count
  std::vector<ClipPrediction> predictions;

  double accuracy() const noexcept { return clips == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(clips); }

  /// Accuracy pooled over the clips whose true class satisfies `keep`.
  template <typename Pred>
  double accuracy_where(Pred keep) const {
    std::size_t total = 0, ok = 0;
    for (const auto& [id, t] : per_class) {
      if (!keep(id)) continue;
      total += t.total;
      ok += t.correct;
    }
    return total == 0 ? 0.0 : static_cast<double>(ok) / static_cast<double>(total);
  }
};

/// Plurality vote over window predictions; ties go to the lowest class id.
inline ClipPrediction predict_clip(const ExemplarStore& store, std::span<const Hypervector> frames,
                                   const WindowConfig& cfg) {
  const auto windows = classify_window(store, frames, cfg);
  std::map<ClassId, std::size_t> votes;
  for (const auto& w : windows) ++votes[w.class_id];
  ClipPrediction p;
  p.windows = windows.size();
  for (const auto& [id, n] : votes) {
    if (n > p.votes) {
      p.votes = n;
      p.predicted = id;
    }
  }
  return p;
}

inline EvalResult evaluate(const ExemplarStore& store, std::span<const EncodedClip> clips, const WindowConfig& cfg) {
  EvalResult r;
  r.predictions.reserve(clips.size());
  for (const auto& clip : clips) {
    auto p = predict_clip(store, clip.frames, cfg);
    p.truth = clip.label;
    ++r.clips;
    auto& tally = r.per_class[clip.label];
    ++tally.total;
    if (p.predicted == clip.label) {
      ++r.correct;
      ++tally.correct;
    }
    ++r.confusion[clip.label][p.predicted];
    r.predictions.push_back(p);
  }
  return r;
}

}  // namespace hydrate::classifier
