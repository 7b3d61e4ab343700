#pragma once

// "HYDE" exemplar file:
//   magic "HYDE" | version u16 = 1 | D u32 | class_count u16
//   | per class: class_id u16 | sample_count u32 | exemplar (D/8 bytes)
//                | [accumulator, D x i32]
// The accumulator block is either present for every class or for none
// (inference-only export); readers tell the two apart from the payload size.
// The accumulator's net add/sub counter is not persisted; on load it is set
// to sample_count.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hydrate/classifier/exemplar_store.hpp"
#include "hydrate/hdc/hydv.hpp"
#include "hydrate/io/binary.hpp"

namespace hydrate::classifier {

inline constexpr std::uint16_t kHydeVersion = 1;

inline std::vector<std::uint8_t> encode_hyde(const ExemplarStore& store, bool with_accumulators = true) {
  if (with_accumulators && !store.trainable()) {
    throw StateError("cannot write accumulators for an inference-only store");
  }
  io::ByteWriter w;
  w.magic("HYDE");
  w.u16(kHydeVersion);
  w.u32(static_cast<std::uint32_t>(store.dim()));
  w.u16(static_cast<std::uint16_t>(store.size()));
  for (const auto& [id, e] : store.classes()) {
    w.u16(id);
    w.u32(e.sample_count);
    hdc::put_hypervector(w, e.exemplar);
    if (with_accumulators) {
      for (auto c : e.accumulator->counts()) w.i32(c);
    }
  }
  return w.release();
}

/// `tie_seed` is not part of the file; pass the seed the store was built with
/// so later retraining breaks ties identically.
inline ExemplarStore decode_hyde(std::span<const std::uint8_t> bytes, std::uint64_t tie_seed) {
  io::ByteReader r(bytes);
  r.expect_magic("HYDE");
  r.expect_version(kHydeVersion);
  const auto dim_at = r.offset();
  const auto dim = r.u32();
  if (dim == 0 || dim % hdc::kWordBits != 0) {
    throw FormatError("HYDE dimension " + std::to_string(dim) + " is not a positive multiple of 64", dim_at);
  }
  const auto class_count = r.u16();
  const std::uint64_t slim = 2 + 4 + dim / 8;
  const std::uint64_t full = slim + 4ull * dim;
  bool with_acc;
  if (r.remaining() == slim * class_count) {
    with_acc = false;
  } else if (r.remaining() == full * class_count) {
    with_acc = true;
  } else {
    throw FormatError("HYDE payload of " + std::to_string(r.remaining()) + " bytes matches neither " +
                          std::to_string(slim * class_count) + " (no accumulators) nor " +
                          std::to_string(full * class_count) + " (with accumulators)",
                      r.offset());
  }

  ExemplarStore store(dim, tie_seed);
  for (std::uint16_t c = 0; c < class_count; ++c) {
    const auto id_at = r.offset();
    const ClassId id = r.u16();
    if (store.contains(id)) throw FormatError("duplicate class id " + std::to_string(id), id_at);
    ClassEntry e;
    e.sample_count = r.u32();
    e.exemplar = hdc::get_hypervector(r, dim);
    if (with_acc) {
      std::vector<std::int32_t> counts(dim);
      for (auto& v : counts) v = r.i32();
      e.accumulator.emplace(dim, std::move(counts), e.sample_count);
      if (hdc::binarize(*e.accumulator, store.tie_breaker()) != e.exemplar) {
        throw FormatError("class " + std::to_string(id) + " exemplar does not match its accumulator", id_at);
      }
    }
    store.insert_loaded(id, std::move(e));
  }
  return store;
}

inline void save_hyde(const std::string& path, const ExemplarStore& store, bool with_accumulators = true) {
  io::write_file(path, encode_hyde(store, with_accumulators));
}

inline ExemplarStore load_hyde(const std::string& path, std::uint64_t tie_seed) {
  return decode_hyde(io::read_file(path), tie_seed);
}

}  // namespace hydrate::classifier
