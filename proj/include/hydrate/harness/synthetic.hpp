#pragma once

// Seeded synthetic stand-in for per-frame CNN features of labelled clips.
//
// A shared base vector is drawn in [base_lo, base_hi]. Each class moves
// `active_dims` randomly chosen features of it by +-separation (toward the
// middle of the code range), giving its prototype. Frames are the prototype
// plus a per-clip offset (clip_sigma) plus per-frame jitter (sigma), rounded
// and clamped to [0, 255].

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hydrate/encoder/hydf.hpp"
#include "hydrate/encoder/item_memory.hpp"
#include "hydrate/error.hpp"
#include "hydrate/hdc/hypervector.hpp"
#include "hydrate/rng.hpp"

namespace hydrate::harness {

using encoder::FeatureFrame;
using encoder::FeatureSequence;
using encoder::FeatureSet;

struct SyntheticTaskSpec {
  std::size_t num_classes = 10;
  std::size_t features = 32;  // K
  std::size_t frames_per_clip = 50;
  std::size_t train_clips_per_class = 25;
  std::size_t test_clips_per_class = 10;
  double sigma = 12.0;       // per-frame jitter, feature units
  double clip_sigma = 20.0;  // per-clip offset, feature units
  std::size_t active_dims = 3;
  int separation = 64;
  int base_lo = 64;
  int base_hi = 192;
  std::uint64_t seed = 1;

  void validate() const {
    if (num_classes == 0 || features == 0 || frames_per_clip == 0 || train_clips_per_class == 0 ||
        test_clips_per_class == 0) {
      throw ConfigError("synthetic task counts must be positive");
    }
    if (num_classes > std::numeric_limits<std::uint16_t>::max()) throw ConfigError("too many classes for a u16 label");
    if (active_dims == 0 || active_dims > features) throw ConfigError("active_dims must lie in [1, K]");
    if (!(sigma >= 0.0) || !(clip_sigma >= 0.0)) throw ConfigError("jitter must be non-negative and finite");
    if (separation <= 0 || separation > 255) throw ConfigError("separation must lie in [1, 255]");
    if (base_lo < 0 || base_hi > 255 || base_lo > base_hi) throw ConfigError("base range must lie within [0, 255]");
  }
};

inline std::uint8_t clamp_u8(double v) { return static_cast<std::uint8_t>(std::clamp(std::nearbyint(v), 0.0, 255.0)); }

inline std::vector<FeatureFrame> make_prototypes(const SyntheticTaskSpec& spec) {
  spec.validate();
  SplitMix64 rng(derive_seed({spec.seed, 0x70726F746Full}));
  FeatureFrame base(spec.features);
  const auto span = static_cast<std::uint64_t>(spec.base_hi - spec.base_lo + 1);
  for (auto& b : base) b = static_cast<std::uint8_t>(spec.base_lo + static_cast<int>(rng.below(span)));

  std::vector<FeatureFrame> protos;
  protos.reserve(spec.num_classes);
  std::vector<std::size_t> dims(spec.features);
  for (std::size_t c = 0; c < spec.num_classes; ++c) {
    FeatureFrame p = base;
    std::iota(dims.begin(), dims.end(), std::size_t{0});
    for (std::size_t i = 0; i < spec.active_dims; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(spec.features - i));
      std::swap(dims[i], dims[j]);
      const int b = base[dims[i]];
      const int up = b + spec.separation, down = b - spec.separation;
      int v;
      if (up > 255) {
        v = down;
      } else if (down < 0) {
        v = up;
      } else {
        v = b < 128 ? up : down;
      }
      p[dims[i]] = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
    }
    protos.push_back(std::move(p));
  }
  return protos;
}

inline FeatureSequence make_clip(const SyntheticTaskSpec& spec, const FeatureFrame& proto, std::uint16_t label,
                                 std::uint64_t split, std::uint32_t index) {
  SplitMix64 rng(derive_seed({spec.seed, split, label, index}));
  std::vector<double> offset(spec.features, 0.0);
  if (spec.clip_sigma > 0.0) {
    for (auto& o : offset) o = spec.clip_sigma * rng.normal();
  }
  FeatureSequence seq;
  seq.label = label;
  seq.frames.reserve(spec.frames_per_clip);
  for (std::size_t t = 0; t < spec.frames_per_clip; ++t) {
    FeatureFrame f(spec.features);
    for (std::size_t k = 0; k < spec.features; ++k) {
      const double jitter = spec.sigma > 0.0 ? spec.sigma * rng.normal() : 0.0;
      f[k] = clamp_u8(proto[k] + offset[k] + jitter);
    }
    seq.frames.push_back(std::move(f));
  }
  return seq;
}

struct SyntheticTask {
  FeatureSet train;
  FeatureSet test;
};

/// Clips are ordered by class, then by clip index; source_id is the clip's
/// position within its split.
inline SyntheticTask gen_synthetic(const SyntheticTaskSpec& spec) {
  const auto protos = make_prototypes(spec);
  SyntheticTask task;
  for (auto* set : {&task.train, &task.test}) {
    set->features = spec.features;
    set->frames_per_clip = spec.frames_per_clip;
  }
  const auto fill = [&](FeatureSet& set, std::uint64_t split, std::size_t per_class) {
    set.clips.reserve(spec.num_classes * per_class);
    for (std::size_t c = 0; c < spec.num_classes; ++c) {
      for (std::size_t i = 0; i < per_class; ++i) {
        auto clip = make_clip(spec, protos[c], static_cast<std::uint16_t>(c), split, static_cast<std::uint32_t>(i));
        clip.source_id = static_cast<std::uint32_t>(set.clips.size());
        set.clips.push_back(std::move(clip));
      }
    }
  };
  fill(task.train, 0x747261696Eull, spec.train_clips_per_class);
  fill(task.test, 0x74657374ull, spec.test_clips_per_class);
  return task;
}

/// Mean squared feature value over every frame of every clip.
inline double signal_power(const FeatureSet& set) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& clip : set.clips) {
    for (const auto& f : clip.frames) {
      for (auto v : f) sum += static_cast<double>(v) * v;
      n += f.size();
    }
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

/// Additive white Gaussian noise at the requested SNR relative to the set's
/// mean squared feature value. An infinite SNR returns the input unchanged.
/// The same seed yields the same standard-normal draws at every SNR.
inline FeatureSet add_gaussian_noise(const FeatureSet& set, double snr_db, std::uint64_t seed) {
  if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity()) {
    throw ArgumentError("SNR must be a finite number of dB or +inf");
  }
  if (std::isinf(snr_db)) return set;
  const double sigma = std::sqrt(signal_power(set) / std::pow(10.0, snr_db / 10.0));
  FeatureSet out = set;
  SplitMix64 rng(derive_seed({seed, 0x6E6F697365ull}));
  for (auto& clip : out.clips) {
    for (auto& f : clip.frames) {
      for (auto& v : f) v = clamp_u8(static_cast<double>(v) + sigma * rng.normal());
    }
  }
  return out;
}

/// Flips exactly round(p * D) distinct positions chosen uniformly. The
/// positions are a prefix of one seeded permutation, so for a fixed seed a
/// larger p flips a superset of the bits a smaller p flips.
inline hdc::Hypervector flip_bits(const hdc::Hypervector& h, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("flip fraction must lie in [0, 1]");
  const std::size_t d = h.dim();
  const auto m = static_cast<std::size_t>(std::llround(p * static_cast<double>(d)));
  hdc::Hypervector out = h;
  if (m == 0) return out;
  if (m == d) return hdc::complement(h);
  std::vector<std::uint32_t> idx(d);
  std::iota(idx.begin(), idx.end(), std::uint32_t{0});
  SplitMix64 rng(derive_seed({seed, 0x666C6970ull}));
  for (std::size_t i = 0; i < m; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(d - i));
    std::swap(idx[i], idx[j]);
    out.flip_bit(idx[i]);
  }
  return out;
}

}  // namespace hydrate::harness
