#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "hydrate/harness/experiments.hpp"
#include "hydrate/harness/synthetic.hpp"
#include "support.hpp"

using namespace hydrate;
using namespace hydrate::harness;
using hdc::hamming;
using testsupport::for_all;
using testsupport::gen_hv;

namespace {

SyntheticTaskSpec small_spec(std::uint64_t seed = 1) {
  SyntheticTaskSpec s;
  s.seed = seed;
  s.train_clips_per_class = 4;
  s.test_clips_per_class = 2;
  s.frames_per_clip = 16;
  return s;
}

std::size_t frame_count(const encoder::FeatureSet& set) {
  std::size_t n = 0;
  for (const auto& c : set.clips) n += c.frames.size();
  return n;
}

}  // namespace

// --- synthetic task -------------------------------------------------------------

TEST(Synthetic, ZeroJitterFramesEqualPrototype) {
  auto spec = small_spec();
  spec.sigma = 0;
  spec.clip_sigma = 0;
  const auto protos = make_prototypes(spec);
  const auto task = gen_synthetic(spec);
  for (const auto* set : {&task.train, &task.test}) {
    for (const auto& clip : set->clips) {
      for (const auto& f : clip.frames) ASSERT_EQ(f, protos[clip.label]);
    }
  }
}

TEST(Synthetic, FrameCountArithmetic) {
  SyntheticTaskSpec spec;
  spec.train_clips_per_class = 20;
  const auto task = gen_synthetic(spec);
  EXPECT_EQ(frame_count(task.train), 10000u);
  EXPECT_EQ(task.train.clips.size(), 200u);
  for (const auto& c : task.train.clips) {
    for (const auto& f : c.frames) ASSERT_EQ(f.size(), 32u);
  }
}

TEST(Synthetic, PrototypesDifferOnlyInActiveDims) {
  const SyntheticTaskSpec spec;
  const auto protos = make_prototypes(spec);
  for (std::size_t a = 0; a < protos.size(); ++a) {
    for (std::size_t b = a + 1; b < protos.size(); ++b) {
      std::size_t differ = 0;
      for (std::size_t k = 0; k < spec.features; ++k) differ += protos[a][k] != protos[b][k];
      EXPECT_LE(differ, 2 * spec.active_dims);
      EXPECT_GT(differ, 0u) << a << " vs " << b;
    }
  }
}

TEST(Synthetic, DeterministicPerSeed) {
  const auto a = gen_synthetic(small_spec(3)), b = gen_synthetic(small_spec(3)), c = gen_synthetic(small_spec(4));
  EXPECT_EQ(encoder::encode_hydf(a.train), encoder::encode_hydf(b.train));
  EXPECT_EQ(encoder::encode_hydf(a.test), encoder::encode_hydf(b.test));
  EXPECT_NE(encoder::encode_hydf(a.train), encoder::encode_hydf(c.train));
}

TEST(Synthetic, InvalidSpecs) {
  auto s = small_spec();
  s.num_classes = 0;
  EXPECT_THROW(gen_synthetic(s), ConfigError);
  s = small_spec();
  s.active_dims = 33;
  EXPECT_THROW(gen_synthetic(s), ConfigError);
  s = small_spec();
  s.sigma = -1;
  EXPECT_THROW(gen_synthetic(s), ConfigError);
}

TEST(Synthetic, DefaultTaskReachesNinetyFivePercentAtD4096) {
  const auto r = run_trial(SyntheticTaskSpec{}, PipelineConfig{});
  std::printf("default task accuracy: %.4f\n", r.accuracy());
  EXPECT_GE(r.accuracy(), 0.95);
}

// --- noise ----------------------------------------------------------------------

TEST(Noise, InfiniteSnrIsIdentityAndBadSnrThrows) {
  const auto task = gen_synthetic(small_spec());
  const auto same = add_gaussian_noise(task.test, std::numeric_limits<double>::infinity(), 1);
  EXPECT_EQ(encoder::encode_hydf(same), encoder::encode_hydf(task.test));
  EXPECT_THROW(add_gaussian_noise(task.test, std::nan(""), 1), ArgumentError);
  EXPECT_THROW(add_gaussian_noise(task.test, -std::numeric_limits<double>::infinity(), 1), ArgumentError);
}

TEST(Noise, MeasuredSnrWithinHalfDecibel) {
  const auto task = gen_synthetic(SyntheticTaskSpec{});
  double p_signal = 0;
  std::size_t n = 0;
  for (const auto& c : task.test.clips)
    for (const auto& f : c.frames)
      for (auto v : f) {
        p_signal += static_cast<double>(v) * v;
        ++n;
      }
  p_signal /= static_cast<double>(n);
  for (double snr : {40.0, 20.0, 10.0}) {
    const auto noisy = add_gaussian_noise(task.test, snr, 9);
    double p_noise = 0;
    for (std::size_t c = 0; c < noisy.clips.size(); ++c)
      for (std::size_t t = 0; t < noisy.clips[c].frames.size(); ++t)
        for (std::size_t k = 0; k < noisy.clips[c].frames[t].size(); ++k) {
          const double e = static_cast<double>(noisy.clips[c].frames[t][k]) - task.test.clips[c].frames[t][k];
          p_noise += e * e;
        }
    p_noise /= static_cast<double>(n);
    const double measured = 10.0 * std::log10(p_signal / p_noise);
    std::printf("requested %.1f dB, measured %.3f dB\n", snr, measured);
    EXPECT_NEAR(measured, snr, 0.5);
  }
}

TEST(Noise, SeededAndShapePreserving) {
  const auto task = gen_synthetic(small_spec());
  const auto a = add_gaussian_noise(task.test, 20, 5), b = add_gaussian_noise(task.test, 20, 5);
  EXPECT_EQ(encoder::encode_hydf(a), encoder::encode_hydf(b));
  EXPECT_NE(encoder::encode_hydf(a), encoder::encode_hydf(add_gaussian_noise(task.test, 20, 6)));
  EXPECT_EQ(a.clips.size(), task.test.clips.size());
}

// --- bit flips ------------------------------------------------------------------

TEST(FlipBits, Endpoints) {
  const auto h = hdc::random_hv(1, 0, 4096);
  EXPECT_EQ(flip_bits(h, 0.0, 3), h);
  EXPECT_EQ(flip_bits(h, 1.0, 3), hdc::complement(h));
  EXPECT_THROW(flip_bits(h, -0.1, 3), ArgumentError);
  EXPECT_THROW(flip_bits(h, 1.1, 3), ArgumentError);
}

TEST(FlipBitsProperty, ExactCountAndNestedSets) {
  for_all(100, 501, [](SplitMix64& rng, std::size_t) {
    const std::size_t dims[] = {64, 512, 4096};
    const auto d = dims[rng.below(3)];
    const auto h = gen_hv(rng, d);
    const double p = rng.uniform(), q = p * rng.uniform();
    const auto seed = rng();
    const auto fp = flip_bits(h, p, seed), fq = flip_bits(h, q, seed);
    ASSERT_EQ(hamming(h, fp), static_cast<std::size_t>(std::llround(p * static_cast<double>(d))));
    // Positions flipped at q are a subset of those flipped at p.
    ASSERT_EQ(hamming(fq, fp), hamming(h, fp) - hamming(h, fq));
  });
}

TEST(FlipBits, MonteCarloDistanceShiftMatchesClosedForm) {
  const std::size_t D = 4096;
  const auto h = hdc::random_hv(11, 0, D);
  auto c = h;
  for (std::size_t i = 0; i < 900; ++i) c.flip_bit(i * 4);  // d = 900
  const double d = static_cast<double>(hamming(h, c));
  for (double p : {0.1, 0.3, 0.45}) {
    const double m = static_cast<double>(std::llround(p * D));
    double sum = 0;
    for (std::uint64_t s = 0; s < 1000; ++s) sum += static_cast<double>(hamming(flip_bits(h, p, s), c));
    const double mean = sum / 1000.0;
    const double want = d + m * (static_cast<double>(D) - 2 * d) / static_cast<double>(D);
    // distance = d + m - 2X with X hypergeometric(D, d, m)
    const double var_x = m * (d / D) * (1 - d / D) * (D - m) / (D - 1.0);
    const double sigma_mean = std::sqrt(4 * var_x / 1000.0);
    EXPECT_LE(std::fabs(mean - want), 3 * sigma_mean) << "p=" << p;
  }
}

// --- sweeps ---------------------------------------------------------------------

TEST(Sweeps, SingleDimGivesSingleRowWithEcho) {
  PipelineConfig pipe;
  const std::vector<std::size_t> dims = {512};
  const auto r = sweep_dim(small_spec(), pipe, dims, 2);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.value(0, "dim"), 512.0);
  EXPECT_EQ(r.value(0, "trials"), 2.0);
  const auto csv = r.to_csv();
  EXPECT_EQ(csv.rfind("# experiment=sweep-dim\n", 0), 0u);
  EXPECT_NE(csv.find("# seed=1\n"), std::string::npos);
  EXPECT_NE(csv.find("# clip_sigma=20.000000\n"), std::string::npos);
  EXPECT_NE(csv.find("dim,trials,mean_accuracy,std_accuracy,min_accuracy,max_accuracy\n"), std::string::npos);
  EXPECT_EQ(csv, sweep_dim(small_spec(), pipe, dims, 2).to_csv());
}

TEST(Sweeps, StatsAreConsistent) {
  PipelineConfig pipe;
  pipe.dim = 512;
  const std::vector<std::size_t> dims = {256, 1024};
  const auto r = sweep_dim(small_spec(2), pipe, dims, 3);
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    EXPECT_LE(r.value(i, "min_accuracy"), r.value(i, "mean_accuracy"));
    EXPECT_LE(r.value(i, "mean_accuracy"), r.value(i, "max_accuracy"));
    EXPECT_GE(r.value(i, "std_accuracy"), 0.0);
  }
  // Trial t of a sweep is the same run as run_trial(t).
  PipelineConfig p256 = pipe;
  p256.dim = 256;
  double mean = 0;
  for (std::size_t t = 0; t < 3; ++t) mean += run_trial(small_spec(2), p256, t).accuracy() / 3.0;
  EXPECT_NEAR(r.value(0, "mean_accuracy"), mean, 1e-6);
}

TEST(Sweeps, NoiseAndBitflipRowsFollowInputs) {
  PipelineConfig pipe;
  pipe.dim = 1024;
  const std::vector<double> snr = {std::numeric_limits<double>::infinity(), 20.0};
  const auto rn = sweep_noise(small_spec(), pipe, snr, 1, 7);
  ASSERT_EQ(rn.rows.size(), 2u);
  EXPECT_EQ(rn.rows[0][0], "inf");
  const std::vector<double> ps = {0.0, 0.5};
  const auto rb = sweep_bitflip(small_spec(), pipe, ps, 1, 7);
  ASSERT_EQ(rb.rows.size(), 2u);
  // At p=0 the sweep equals a clean trial.
  EXPECT_NEAR(rb.value(0, "mean_accuracy"), run_trial(small_spec(), pipe).accuracy(), 1e-6);
  EXPECT_NEAR(rn.value(0, "mean_accuracy"), run_trial(small_spec(), pipe).accuracy(), 1e-6);
}

TEST(Sweeps, KShotWithAllClipsEqualsFullTraining) {
  const auto spec = small_spec(5);
  PipelineConfig pipe;
  pipe.dim = 1024;
  const std::vector<std::size_t> ks = {spec.train_clips_per_class};
  const auto r = sweep_kshot(spec, pipe, 2, ks, 1);
  const auto full = run_trial(spec, pipe);
  EXPECT_EQ(r.rows[0][r.column("old_exemplars_unchanged")], "1");
  const double pooled = r.value(0, "new_class_accuracy") * 2.0 / 20.0 + r.value(0, "old_class_accuracy") * 18.0 / 20.0;
  EXPECT_NEAR(pooled, full.accuracy(), 1e-6);
}

TEST(Sweeps, ArgumentChecks) {
  PipelineConfig pipe;
  const std::vector<std::size_t> ks = {0};
  EXPECT_THROW(sweep_kshot(small_spec(), pipe, 1, ks, 1), ArgumentError);
  const std::vector<std::size_t> ok = {1};
  EXPECT_THROW(sweep_kshot(small_spec(), pipe, 99, ok, 1), ArgumentError);
  EXPECT_THROW(sweep_dim(small_spec(), pipe, ok, 0), ArgumentError);
  const std::vector<std::size_t> bad_dim = {100};
  EXPECT_THROW(sweep_dim(small_spec(), pipe, bad_dim, 1), ConfigError);
}

TEST(Shots, FirstKClipsOfTheClass) {
  std::vector<classifier::EncodedClip> clips = {
      {0, {hdc::random_hv(1, 0, 64)}}, {1, {hdc::random_hv(1, 1, 64)}}, {0, {hdc::random_hv(1, 2, 64)}}};
  const auto s = shots_of(clips, 0, 2);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[1], clips[2].frames[0]);
  EXPECT_THROW(shots_of(clips, 1, 2), ArgumentError);
}
