#pragma once

// "HYDF" feature file:
//   magic "HYDF" | version u16 = 1 | K u32 | frame_count u32 | clip_count u32
//   | clip_count x label u16 | clip_count x frame_count x K raw u8 codes
// Clip-major, then frame-major. Every clip has frame_count frames.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hydrate/encoder/item_memory.hpp"
#include "hydrate/io/binary.hpp"

namespace hydrate::encoder {

inline constexpr std::uint16_t kHydfVersion = 1;

struct FeatureSet {
  std::size_t features = 0;
  std::size_t frames_per_clip = 0;
  std::vector<FeatureSequence> clips;
};

inline std::vector<std::uint8_t> encode_hydf(const FeatureSet& set) {
  io::ByteWriter w;
  w.magic("HYDF");
  w.u16(kHydfVersion);
  w.u32(static_cast<std::uint32_t>(set.features));
  w.u32(static_cast<std::uint32_t>(set.frames_per_clip));
  w.u32(static_cast<std::uint32_t>(set.clips.size()));
  for (const auto& c : set.clips) w.u16(c.label);
  for (const auto& c : set.clips) {
    if (c.frames.size() != set.frames_per_clip) {
      throw DimensionError("HYDF: clip " + std::to_string(c.source_id) + " has " +
                           std::to_string(c.frames.size()) + " frames, expected " +
                           std::to_string(set.frames_per_clip));
    }
    for (const auto& f : c.frames) {
      if (f.size() != set.features) throw DimensionError("HYDF: frame length differs from K");
      w.bytes(f);
    }
  }
  return w.release();
}

inline FeatureSet decode_hydf(std::span<const std::uint8_t> bytes) {
  io::ByteReader r(bytes);
  r.expect_magic("HYDF");
  r.expect_version(kHydfVersion);
  FeatureSet set;
  const auto k_at = r.offset();
  set.features = r.u32();
  if (set.features == 0) throw FormatError("HYDF feature count K is zero", k_at);
  set.frames_per_clip = r.u32();
  const auto clip_count = r.u32();
  const std::uint64_t payload = std::uint64_t{clip_count} * 2 +
                                std::uint64_t{clip_count} * set.frames_per_clip * set.features;
  if (payload != r.remaining()) {
    throw FormatError("HYDF payload is " + std::to_string(r.remaining()) + " bytes, header implies " +
                          std::to_string(payload),
                      r.offset());
  }
  set.clips.resize(clip_count);
  for (std::uint32_t c = 0; c < clip_count; ++c) {
    set.clips[c].label = r.u16();
    set.clips[c].source_id = c;
  }
  for (auto& clip : set.clips) {
    clip.frames.resize(set.frames_per_clip);
    for (auto& f : clip.frames) {
      auto raw = r.take(set.features);
      f.assign(raw.begin(), raw.end());
    }
  }
  return set;
}

inline void save_hydf(const std::string& path, const FeatureSet& set) { io::write_file(path, encode_hydf(set)); }

inline FeatureSet load_hydf(const std::string& path) { return decode_hydf(io::read_file(path)); }

}  // namespace hydrate::encoder
