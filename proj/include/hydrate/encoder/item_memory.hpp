#pragma once

#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "hydrate/hdc/bundle.hpp"
#include "hydrate/hdc/hypervector.hpp"

namespace hydrate::encoder {

using hdc::Hypervector;
using hdc::TieBreaker;

/// One quantized feature vector (8-bit codes), as emitted per video frame.
using FeatureFrame = std::vector<std::uint8_t>;

struct FeatureSequence {
  std::vector<FeatureFrame> frames;
  std::uint16_t label = 0;
  std::uint32_t source_id = 0;
};

/// Uniform binning of an 8-bit code into `levels` bins.
constexpr std::size_t level_of(std::uint8_t value, std::size_t levels) noexcept {
  const std::size_t l = static_cast<std::size_t>(value) * levels / 256;
  return l < levels ? l : levels - 1;
}

/// Position and level item memories.
///
/// Positions P_k are independent random vectors on streams 0..K-1. Levels
/// form a chain: V_l is V_0 with the first floor(l*D / (2(L-1))) entries of
/// a seeded bit permutation flipped, so for a <= b
///   hamming(V_a, V_b) = floor(b*D/(2(L-1))) - floor(a*D/(2(L-1)))
/// holds exactly and the end points sit D/2 apart. With 2(L-1) > D some
/// adjacent levels coincide.
class ItemMemory {
 public:
  // Streams above any realistic K, keeping level material independent of positions.
  static constexpr std::uint64_t kLevelBaseStream = 0x4C45'5645'4C00'0000ull;
  static constexpr std::uint64_t kFlipOrderStream = 0x464C'4950'0000'0000ull;

  ItemMemory(std::uint64_t seed, std::size_t dim, std::size_t features, std::size_t levels)
      : seed_(seed), dim_(dim), features_(features), levels_(levels) {
    hdc::check_dim(dim);
    if (features == 0) throw ConfigError("item memory needs at least one feature position");
    if (levels < 2) throw ConfigError("item memory needs at least two levels, got " + std::to_string(levels));

    positions_.reserve(features);
    for (std::size_t k = 0; k < features; ++k) positions_.push_back(hdc::random_hv(seed, k, dim));

    flip_order_.resize(dim);
    std::iota(flip_order_.begin(), flip_order_.end(), std::uint32_t{0});
    SplitMix64 rng(derive_seed({seed, kFlipOrderStream, dim}));
    for (std::size_t i = dim - 1; i > 0; --i) {
      const auto j = static_cast<std::size_t>(rng.below(i + 1));
      std::swap(flip_order_[i], flip_order_[j]);
    }

    levels_hv_.reserve(levels);
    Hypervector current = hdc::random_hv(seed, kLevelBaseStream, dim);
    std::size_t flipped = 0;
    for (std::size_t l = 0; l < levels; ++l) {
      const std::size_t target = level_flip_count(l);
      for (; flipped < target; ++flipped) current.flip_bit(flip_order_[flipped]);
      levels_hv_.push_back(current);
    }
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t features() const noexcept { return features_; }
  std::size_t levels() const noexcept { return levels_; }

  const Hypervector& position(std::size_t k) const { return positions_.at(k); }
  const Hypervector& level(std::size_t l) const { return levels_hv_.at(l); }
  std::span<const std::uint32_t> flip_order() const noexcept { return flip_order_; }

  /// Number of permutation entries flipped between V_0 and V_l.
  std::size_t level_flip_count(std::size_t l) const noexcept { return l * dim_ / (2 * (levels_ - 1)); }

 private:
  std::uint64_t seed_;
  std::size_t dim_;
  std::size_t features_;
  std::size_t levels_;
  std::vector<Hypervector> positions_;
  std::vector<Hypervector> levels_hv_;
  std::vector<std::uint32_t> flip_order_;
};

/// Bundles P_k xor V_level(v_k) over all K features into one vector.
inline Hypervector encode_frame(std::span<const std::uint8_t> frame, const ItemMemory& im, const TieBreaker& tb) {
  if (frame.size() != im.features()) {
    throw DimensionError("frame has " + std::to_string(frame.size()) + " features, item memory expects " +
                         std::to_string(im.features()));
  }
  hdc::BitSlicedCounter counter(im.dim());
  for (std::size_t k = 0; k < frame.size(); ++k) {
    counter.add_xor(im.position(k), im.level(level_of(frame[k], im.levels())));
  }
  return counter.majority(tb);
}

inline std::vector<Hypervector> encode_sequence(const FeatureSequence& seq, const ItemMemory& im,
                                                const TieBreaker& tb) {
  std::vector<Hypervector> out;
  out.reserve(seq.frames.size());
  for (const auto& f : seq.frames) out.push_back(encode_frame(f, im, tb));
  return out;
}

}  // namespace hydrate::encoder
