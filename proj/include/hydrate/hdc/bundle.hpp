#pragma once

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "hydrate/hdc/hypervector.hpp"

namespace hydrate::hdc {

/// Resolves exact majority ties with a fixed seeded vector.
class TieBreaker {
 public:
  // Stream reserved for tie vectors; item memories use small stream ids.
  static constexpr std::uint64_t kStream = 0x7469'6562'7265'616Bull;

  TieBreaker(std::uint64_t seed, std::size_t dim) : seed_(seed), tie_hv_(random_hv(seed, kStream, dim)) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t dim() const noexcept { return tie_hv_.dim(); }
  const Hypervector& tie_hv() const noexcept { return tie_hv_; }

 private:
  std::uint64_t seed_;
  Hypervector tie_hv_;
};

/// Per-bit signed vote counts: +1 for each set bit, -1 for each clear bit.
class SignedAccumulator {
 public:
  SignedAccumulator() = default;

  explicit SignedAccumulator(std::size_t dim) : dim_(dim) {
    check_dim(dim);
    counts_.assign(dim, 0);
  }

  SignedAccumulator(std::size_t dim, std::vector<std::int32_t> counts, std::int64_t n_added)
      : dim_(dim), counts_(std::move(counts)), n_added_(n_added) {
    check_dim(dim);
    if (counts_.size() != dim) throw DimensionError("accumulator count array does not match dimension");
    // Loaded state: bound later overflow checks by the largest stored magnitude.
    for (auto c : counts_) {
      ops_ = std::max<std::uint64_t>(ops_, static_cast<std::uint64_t>(std::abs(static_cast<std::int64_t>(c))));
    }
  }

  std::size_t dim() const noexcept { return dim_; }
  std::span<const std::int32_t> counts() const noexcept { return counts_; }
  std::int64_t n_added() const noexcept { return n_added_; }

  void add(const Hypervector& h) { apply(h, +1); }
  void sub(const Hypervector& h) { apply(h, -1); }

  friend bool operator==(const SignedAccumulator&, const SignedAccumulator&) = default;

 private:
  void apply(const Hypervector& h, int sign) {
    if (h.dim() != dim_) {
      throw DimensionError("accumulator dimension " + std::to_string(dim_) + " vs hypervector " +
                           std::to_string(h.dim()));
    }
    // |counts[i]| <= ops_, so overflow is only possible once ops_ reaches the limit.
    constexpr auto kMax = static_cast<std::uint64_t>(std::numeric_limits<std::int32_t>::max());
    if (ops_ >= kMax) {
      for (std::size_t i = 0; i < dim_; ++i) {
        const std::int64_t next = static_cast<std::int64_t>(counts_[i]) + (h.bit(i) ? sign : -sign);
        if (next > std::numeric_limits<std::int32_t>::max() || next < std::numeric_limits<std::int32_t>::min()) {
          throw ArithmeticError("accumulator counter overflow at bit " + std::to_string(i));
        }
      }
    }
    auto words = h.words();
    for (std::size_t j = 0; j < words.size(); ++j) {
      std::uint64_t w = words[j];
      std::int32_t* c = counts_.data() + j * kWordBits;
      for (std::size_t b = 0; b < kWordBits; ++b) {
        c[b] += ((w >> b) & 1u) ? sign : -sign;
      }
    }
    n_added_ += sign;
    ++ops_;
  }

  std::size_t dim_ = 0;
  std::vector<std::int32_t> counts_;
  std::int64_t n_added_ = 0;
  std::uint64_t ops_ = 0;
};

inline Hypervector binarize(const SignedAccumulator& acc, const TieBreaker& tb) {
  if (acc.dim() != tb.dim()) throw DimensionError("tie-breaker dimension does not match accumulator");
  Hypervector out(acc.dim());
  auto counts = acc.counts();
  auto tie = tb.tie_hv().words();
  auto ow = out.words();
  for (std::size_t j = 0; j < ow.size(); ++j) {
    std::uint64_t pos = 0, zero = 0;
    for (std::size_t b = 0; b < kWordBits; ++b) {
      const auto c = counts[j * kWordBits + b];
      pos |= static_cast<std::uint64_t>(c > 0) << b;
      zero |= static_cast<std::uint64_t>(c == 0) << b;
    }
    ow[j] = pos | (zero & tie[j]);
  }
  return out;
}

/// Bit-sliced population counter: plane p holds bit p of every position's
/// count of set bits, 64 positions per word. Adding one vector costs a
/// ripple-carry over the planes instead of D scalar increments.
class BitSlicedCounter {
 public:
  explicit BitSlicedCounter(std::size_t dim) : dim_(dim), words_(dim / kWordBits) { check_dim(dim); }

  std::size_t size() const noexcept { return n_; }

  void add(const Hypervector& h) {
    if (h.dim() != dim_) throw DimensionError("bundle member dimension mismatch");
    if (std::bit_width(n_ + 1) > planes_) grow();
    auto in = h.words();
    for (std::size_t j = 0; j < words_; ++j) add_word(j, in[j]);
    ++n_;
  }

  /// Adds a ^ b without materialising the bound vector.
  void add_xor(const Hypervector& a, const Hypervector& b) {
    if (a.dim() != dim_ || b.dim() != dim_) throw DimensionError("bundle member dimension mismatch");
    if (std::bit_width(n_ + 1) > planes_) grow();
    auto aw = a.words();
    auto bw = b.words();
    for (std::size_t j = 0; j < words_; ++j) add_word(j, aw[j] ^ bw[j]);
    ++n_;
  }

  /// Bit i = 1 when set bits outnumber clear bits, tie vector bit on a draw.
  Hypervector majority(const TieBreaker& tb) const {
    if (tb.dim() != dim_) throw DimensionError("tie-breaker dimension does not match bundle");
    Hypervector out(dim_);
    auto ow = out.words();
    auto tie = tb.tie_hv().words();
    const std::size_t half = n_ / 2;
    const bool even = (n_ % 2) == 0;
    for (std::size_t j = 0; j < words_; ++j) {
      // MSB-first comparison of every slot's count against `half`.
      std::uint64_t gt = 0, eq = ~std::uint64_t{0};
      for (std::size_t p = planes_; p-- > 0;) {
        const std::uint64_t plane = planes_data_[p * words_ + j];
        if ((half >> p) & 1u) {
          eq &= plane;
        } else {
          gt |= eq & plane;
          eq &= ~plane;
        }
      }
      ow[j] = gt | (even ? (eq & tie[j]) : 0);
    }
    return out;
  }

 private:
  void add_word(std::size_t j, std::uint64_t carry) {
    for (std::size_t p = 0; p < planes_ && carry != 0; ++p) {
      std::uint64_t& plane = planes_data_[p * words_ + j];
      const std::uint64_t next = plane & carry;
      plane ^= carry;
      carry = next;
    }
  }

  void grow() {
    ++planes_;
    planes_data_.resize(planes_ * words_, 0);
  }

  std::size_t dim_;
  std::size_t words_;
  std::size_t planes_ = 0;
  std::size_t n_ = 0;
  std::vector<std::uint64_t> planes_data_;
};

inline Hypervector majority_bundle(std::span<const Hypervector> vs, const TieBreaker& tb) {
  if (vs.empty()) throw ArgumentError("majority_bundle of an empty list");
  BitSlicedCounter counter(vs.front().dim());
  for (const auto& v : vs) counter.add(v);
  return counter.majority(tb);
}

}  // namespace hydrate::hdc
