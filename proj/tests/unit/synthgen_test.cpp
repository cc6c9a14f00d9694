#include "repsim/synthgen.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"

namespace repsim {
namespace {

GeneratorConfig small_config() {
  GeneratorConfig c;
  c.num_users = 60;
  c.num_objects = 50;
  c.sparsity = 0.2;
  c.sigma_min = 0.0;
  c.sigma_max = 2.0;
  c.seed = 99;
  return c;
}

TEST(GeneratorConfig, ValidationNamesTheField) {
  auto c = small_config();
  c.sparsity = 1.5;
  try {
    c.validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "sparsity");
  }
  c = small_config();
  c.sparsity = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_config();
  c.sigma_max = -1.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_config();
  c.r_max = 1;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(GroundTruth, DegenerateErrorInterval) {
  auto c = small_config();
  c.sigma_max = 0.0;
  for (double s : generate_ground_truth(c).user_error) EXPECT_EQ(s, 0.0);
}

TEST(GroundTruth, QualityMeanWithinThreeStandardErrors) {
  auto c = small_config();
  c.num_objects = 10000;
  const auto truth = generate_ground_truth(c);
  double sum = 0.0;
  for (double q : truth.true_quality) {
    EXPECT_GE(q, 1.0);
    EXPECT_LE(q, 5.0);
    sum += q;
  }
  // U[1,5]: mean 3, stddev 4/sqrt(12).
  const double se = 4.0 / std::sqrt(12.0) / std::sqrt(10000.0);
  EXPECT_NEAR(sum / 10000.0, 3.0, 3.0 * se);
}

TEST(GroundTruth, DeterministicAndWithinBounds) {
  auto c = small_config();
  c.sigma_min = 0.5;
  const auto a = generate_ground_truth(c);
  EXPECT_EQ(a, generate_ground_truth(c));
  for (double s : a.user_error) {
    EXPECT_GE(s, 0.5);
    EXPECT_LE(s, 2.0);
  }
  c.seed = 100;
  EXPECT_NE(a.true_quality, generate_ground_truth(c).true_quality);
}

TEST(SamplePairs, FullDensityTakesEveryPair) {
  auto c = small_config();
  c.num_users = 7;
  c.num_objects = 5;
  c.sparsity = 1.0;
  const auto pairs = sample_pairs(c);
  ASSERT_EQ(pairs.size(), 35u);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    EXPECT_EQ(pairs[k], (UserObjectPair{static_cast<Index>(k / 5), static_cast<Index>(k % 5)}));
  }
}

TEST(SamplePairs, FullScaleCountIsExactAndDistinct) {
  GeneratorConfig c;
  c.num_users = 1000;
  c.num_objects = 1000;
  c.sparsity = 0.1;
  const auto pairs = sample_pairs(c);
  EXPECT_EQ(pairs.size(), 100000u);
  const std::set<UserObjectPair> unique(pairs.begin(), pairs.end());
  EXPECT_EQ(unique.size(), pairs.size());
  EXPECT_EQ(pairs, sample_pairs(c));
  c.seed = 2;
  EXPECT_NE(pairs, sample_pairs(c));
}

TEST(SamplePairs, CountRoundsHalfUp) {
  GeneratorConfig c;
  c.num_users = 5;
  c.num_objects = 3;
  c.sparsity = 0.1;  // 1.5 pairs
  EXPECT_EQ(pair_count(c), 2u);
  c.sparsity = 0.09;  // 1.35
  EXPECT_EQ(pair_count(c), 1u);
}

TEST(SamplePairs, RoughlyUniformOverUsers) {
  GeneratorConfig c;
  c.num_users = 10;
  c.num_objects = 1000;
  c.sparsity = 0.3;
  std::vector<int> per_user(10, 0);
  for (const auto& [u, o] : sample_pairs(c)) ++per_user[u];
  // Hypergeometric, mean 300, stddev ~13.7.
  for (int n : per_user) EXPECT_NEAR(n, 300, 70);
}

TEST(Quantize, RoundsThenTruncates) {
  const RatingScale discrete{5, ScaleMode::DiscreteInteger};
  const RatingScale continuous{5, ScaleMode::Continuous};
  EXPECT_EQ(quantize_rating(3.4, discrete), 3.0);
  EXPECT_EQ(quantize_rating(3.5, discrete), 4.0);  // half away from zero
  EXPECT_EQ(quantize_rating(5.7, discrete), 5.0);
  EXPECT_EQ(quantize_rating(5.7, continuous), 5.0);
  EXPECT_EQ(quantize_rating(0.2, discrete), 1.0);
  EXPECT_EQ(quantize_rating(-0.7, continuous), 1.0);
  EXPECT_EQ(quantize_rating(3.4, continuous), 3.4);
}

TEST(GenerateRatings, ZeroNoiseContinuousReproducesTruth) {
  auto c = small_config();
  c.sigma_max = 0.0;
  const auto data = generate(c);
  for (const auto& r : data.dataset.triples()) EXPECT_EQ(r.value, data.truth.true_quality[r.object]);
}

TEST(GenerateRatings, ZeroNoiseDiscreteRoundsToNearest) {
  auto c = small_config();
  c.num_users = 3;
  c.num_objects = 1;
  c.sparsity = 1.0;
  c.mode = ScaleMode::DiscreteInteger;
  GroundTruth truth{{3.4}, {0.0, 0.0, 0.0}};
  const auto ds = generate_ratings(c, truth, sample_pairs(c));
  for (const auto& r : ds.triples()) EXPECT_EQ(r.value, 3.0);
}

TEST(GenerateRatings, DitherRecoversFractionalQuality) {
  // Q = 3.4 with sigma = 0.5: estimates uniform on [2.9, 3.9], so 60% round
  // to 3 and 40% to 4.
  GeneratorConfig c;
  c.num_users = 20000;
  c.num_objects = 1;
  c.sparsity = 1.0;
  c.mode = ScaleMode::DiscreteInteger;
  GroundTruth truth{{3.4}, std::vector<double>(20000, 0.5)};
  const auto ds = generate_ratings(c, truth, sample_pairs(c));
  int threes = 0;
  double sum = 0.0;
  for (double v : ds.ratings_of_object(0)) {
    EXPECT_TRUE(v == 3.0 || v == 4.0);
    threes += v == 3.0;
    sum += v;
  }
  // Binomial SE ~0.0035 on both quantities.
  EXPECT_NEAR(threes / 20000.0, 0.6, 0.015);
  EXPECT_NEAR(sum / 20000.0, 3.4, 0.015);
}

TEST(GenerateRatings, RangeAndIntegrality) {
  for (auto mode : {ScaleMode::Continuous, ScaleMode::DiscreteInteger}) {
    auto c = small_config();
    c.sigma_max = 4.0;
    c.mode = mode;
    for (const auto& r : generate(c).dataset.triples()) {
      EXPECT_GE(r.value, 1.0);
      EXPECT_LE(r.value, 5.0);
      if (mode == ScaleMode::DiscreteInteger) EXPECT_EQ(r.value, std::round(r.value));
    }
  }
}

TEST(GenerateRatings, DiscreteIsRoundedContinuousFromSameSeed) {
  auto c = small_config();
  c.sigma_max = 3.0;
  const auto cont = generate(c);
  c.mode = ScaleMode::DiscreteInteger;
  const auto disc = generate(c);
  EXPECT_EQ(cont.truth, disc.truth);
  const auto a = cont.dataset.triples();
  const auto b = disc.dataset.triples();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].user, b[k].user);
    EXPECT_EQ(a[k].object, b[k].object);
    EXPECT_EQ(std::round(a[k].value), b[k].value);
  }
}

TEST(GenerateRatings, ErrorBoundsShareUserOrdering) {
  auto c = small_config();
  const auto narrow = generate_ground_truth(c);
  c.sigma_max = 4.0;
  c.sigma_min = 1.0;
  const auto wide = generate_ground_truth(c);
  EXPECT_EQ(narrow.true_quality, wide.true_quality);
  for (std::size_t i = 1; i < narrow.user_error.size(); ++i) {
    EXPECT_EQ(narrow.user_error[i] < narrow.user_error[i - 1], wide.user_error[i] < wide.user_error[i - 1]);
  }
}

TEST(GenerateRatings, BitwiseDeterministic) {
  auto c = small_config();
  c.mode = ScaleMode::DiscreteInteger;
  const auto a = generate(c);
  const auto b = generate(c);
  EXPECT_EQ(a.dataset, b.dataset);
  EXPECT_EQ(a.truth, b.truth);
}

TEST(RoundingFloor, QuadratureAndSamplingAgreeWithClosedForm) {
  const double analytic = 1.0 / std::sqrt(12.0);
  EXPECT_NEAR(oracle::rounding_rms_quadrature(5), analytic, 1e-9);
  EXPECT_NEAR(oracle::rounding_rms_sampled(5, 1000000, 5), analytic, 1e-3);
}

TEST(RoundingFloor, GeneratedDiscreteRatingsMatchIt) {
  GeneratorConfig c;
  c.num_users = 1;
  c.num_objects = 50000;
  c.sparsity = 1.0;
  c.sigma_max = 0.0;
  c.mode = ScaleMode::DiscreteInteger;
  const auto data = generate(c);
  double ss = 0.0;
  for (const auto& r : data.dataset.triples()) {
    const double e = data.truth.true_quality[r.object] - r.value;
    ss += e * e;
  }
  // |e| ~ U[0, 1/2]: var(e^2) = 1/80 - 1/144 = 1/180, so the RMS has an SE
  // of ~5.8e-4 at n = 5e4.
  EXPECT_NEAR(std::sqrt(ss / 50000.0), oracle::rounding_rms_quadrature(5), 2e-3);
}

}  // namespace
}  // namespace repsim
