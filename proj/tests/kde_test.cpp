// Copyright 2026 The VKS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vks/kde.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "support/oracles.hpp"
#include "vks/model.hpp"

namespace vks {
namespace {

TEST(Gaussian, MatchesClosedFormInOneDimension) {
  const std::array<double, 1> zero = {0.0};
  const std::array<double, 1> unit_var = {1.0};
  EXPECT_NEAR(gaussian(zero, unit_var), 0.3989422804014327, 1e-15);

  const std::array<double, 1> one = {1.0};
  EXPECT_NEAR(gaussian(one, unit_var),
              std::exp(-0.5) / std::sqrt(2.0 * std::numbers::pi), 1e-15);
}

TEST(Gaussian, MatchesClosedFormInTwoDimensions) {
  const std::array<double, 2> zero = {0.0, 0.0};
  const std::array<double, 2> var = {0.25, 0.25};
  EXPECT_NEAR(gaussian(zero, var), 0.6366197723675814, 1e-15);
}

TEST(Gaussian, FactorsAcrossDimensions) {
  const std::array<double, 3> x = {0.7, -1.2, 2.1};
  const std::array<double, 3> var = {0.5, 2.0, 3.75};
  double product = 1.0;
  for (int d = 0; d < 3; ++d) {
    const std::array<double, 1> xd = {x[d]};
    const std::array<double, 1> vd = {var[d]};
    product *= gaussian(xd, vd);
  }
  EXPECT_NEAR(gaussian(x, var), product, product * 1e-12);
}

// Midpoint quadrature of the density over a generous box must recover ~1.
TEST(Gaussian, OneDimensionalQuadratureIsNormalized) {
  for (double var : {0.25, 1.0, 3.75, 11.25}) {
    const double half = 8.0 * std::sqrt(var);
    const int steps = 4000;
    const double dx = 2.0 * half / steps;
    double total = 0.0;
    for (int i = 0; i < steps; ++i) {
      const std::array<double, 1> x = {-half + (i + 0.5) * dx};
      const std::array<double, 1> v = {var};
      total += gaussian(x, v) * dx;
    }
    EXPECT_NEAR(total, 1.0, 1e-3) << "var=" << var;
  }
}

TEST(Gaussian, TwoDimensionalQuadratureIsNormalized) {
  const std::array<double, 2> var = {0.75, 2.5};
  const double hx = 8.0 * std::sqrt(var[0]);
  const double hy = 8.0 * std::sqrt(var[1]);
  const int steps = 400;
  const double dx = 2.0 * hx / steps;
  const double dy = 2.0 * hy / steps;
  double total = 0.0;
  for (int i = 0; i < steps; ++i) {
    for (int j = 0; j < steps; ++j) {
      const std::array<double, 2> x = {-hx + (i + 0.5) * dx,
                                       -hy + (j + 0.5) * dy};
      total += gaussian(x, var) * dx * dy;
    }
  }
  EXPECT_NEAR(total, 1.0, 1e-3);
}

TEST(Gaussian, RejectsBadInput) {
  const std::array<double, 2> x = {0.0, 0.0};
  const std::array<double, 1> var = {1.0};
  EXPECT_THROW(gaussian(x, var), std::invalid_argument);
  const std::array<double, 2> bad_var = {1.0, 0.0};
  EXPECT_THROW(gaussian(x, bad_var), std::invalid_argument);
}

TEST(WindowRadius, CoversFourSigmaByDefault) {
  EXPECT_EQ(window_radius(1.0), 4);
  EXPECT_EQ(window_radius(0.25), 2);
  EXPECT_EQ(window_radius(9.0), 12);
  EXPECT_EQ(window_radius(2.0, 4.0),
            static_cast<int>(std::ceil(4.0 * std::sqrt(2.0))));
}

DiagonalCovariance rgb_sigma(double spatial, double color) {
  return {spatial, color, color, 0.75, FeatureMode::kRgb};
}

DiagonalCovariance lab_sigma(double spatial, double l, double ab,
                             double siltp) {
  return {spatial, l, ab, siltp, FeatureMode::kLabSiltp};
}

TEST(KernelScores, SingleSampleMatchesClosedForm) {
  ProcessModel model(8, 8, 4, 3);
  const std::array<double, 3> stored = {100.0, 120.0, 140.0};
  model.push(3, 4, stored, 0.8, 0);
  model.set_frame_count(1);

  FeatureVector query;
  query.x = 4.0;  // one pixel to the right of the stored sample
  query.y = 4.0;
  query.appearance_size = 3;
  query.appearance = {102.0, 120.0, 140.0, 0, 0, 0};

  const DiagonalCovariance sigma = rgb_sigma(0.75, 3.75);
  const double score =
      background_score(query, model, sigma, window_radius(0.75));

  const std::array<double, 2> dpos = {1.0, 0.0};
  const std::array<double, 2> vpos = {0.75, 0.75};
  const std::array<double, 3> dcol = {2.0, 0.0, 0.0};
  const std::array<double, 3> vcol = {3.75, 3.75, 3.75};
  const double expected = 0.8 * gaussian(dpos, vpos) * gaussian(dcol, vcol);
  EXPECT_NEAR(score, expected, expected * 1e-12);
}

TEST(KernelScores, NormalizesByFrameCountNotSampleCount) {
  ProcessModel model(4, 4, 5, 3);
  const std::array<double, 3> stored = {50.0, 60.0, 70.0};
  model.push(2, 2, stored, 1.0, 0);
  model.push(2, 2, stored, 1.0, 1);
  model.set_frame_count(2);

  FeatureVector query;
  query.x = 2.0;
  query.y = 2.0;
  query.appearance = {50.0, 60.0, 70.0, 0, 0, 0};

  // Two identical samples over two frames: same score as one over one.
  const DiagonalCovariance sigma = rgb_sigma(0.75, 3.75);
  const double two = background_score(query, model, sigma, 4);
  ProcessModel single(4, 4, 5, 3);
  single.push(2, 2, stored, 1.0, 0);
  single.set_frame_count(1);
  EXPECT_DOUBLE_EQ(two, background_score(query, single, sigma, 4));
}

TEST(KernelScores, EmptyModelScoresZero) {
  ProcessModel model(8, 8, 5, 3);
  FeatureVector query;
  query.x = 4.0;
  query.y = 4.0;
  EXPECT_EQ(background_score(query, model, rgb_sigma(0.75, 3.75), 4), 0.0);
}

TEST(KernelScores, ZeroWeightSamplesContributeNothing) {
  ProcessModel model(4, 4, 2, 3);
  const std::array<double, 3> stored = {50.0, 60.0, 70.0};
  model.push(2, 2, stored, 0.0, 0);
  model.set_frame_count(1);
  FeatureVector query;
  query.x = 2.0;
  query.y = 2.0;
  query.appearance = {50.0, 60.0, 70.0, 0, 0, 0};
  EXPECT_EQ(background_score(query, model, rgb_sigma(0.75, 3.75), 4), 0.0);

  model.push(2, 2, stored, 0.5, 1);
  EXPECT_GT(background_score(query, model, rgb_sigma(0.75, 3.75), 4), 0.0);
}

TEST(KernelScores, WindowedMatchesNaiveOracleRgb) {
  testing::TestRng rng(101);
  for (int trial = 0; trial < 40; ++trial) {
    ProcessModel model =
        testing::random_model(16, 16, 5, FeatureMode::kRgb, rng);
    const DiagonalCovariance sigma =
        rgb_sigma(rng.pick({0.25, 0.75}), rng.pick({1.25, 3.75, 11.25}));
    FeatureVector query = testing::anchored_query(model, rng);
    const double fast =
        background_score(query, model, sigma, window_radius(sigma.spatial));
    const double naive = testing::naive_kernel_score(query, model, sigma);
    EXPECT_NEAR(fast, naive, naive * 1e-4 + 1e-300) << "trial=" << trial;
  }
}

TEST(KernelScores, WindowedMatchesNaiveOracleLabSiltp) {
  testing::TestRng rng(202);
  for (int trial = 0; trial < 40; ++trial) {
    ProcessModel model =
        testing::random_model(16, 16, 5, FeatureMode::kLabSiltp, rng);
    const DiagonalCovariance sigma =
        lab_sigma(rng.pick({0.25, 0.75}), rng.pick({1.25, 2.5, 5.0}),
                  rng.pick({1.0, 1.5}), 0.75);
    FeatureVector query = testing::anchored_query(model, rng);
    const double fast =
        background_score(query, model, sigma, window_radius(sigma.spatial));
    const double naive = testing::naive_kernel_score(query, model, sigma);
    EXPECT_NEAR(fast, naive, naive * 1e-4 + 1e-300) << "trial=" << trial;
  }
}

TEST(KernelScores, BatchedCandidatesMatchIndividualCalls) {
  testing::TestRng rng(303);
  ProcessModel model =
      testing::random_model(16, 16, 5, FeatureMode::kRgb, rng);
  FeatureVector query = testing::anchored_query(model, rng);
  std::vector<DiagonalCovariance> sigmas;
  for (double s : {0.25, 0.75})
    for (double c : {1.25, 3.75, 11.25}) sigmas.push_back(rgb_sigma(s, c));

  std::vector<double> batched(sigmas.size());
  const int radius = window_radius(0.75);
  kernel_scores(query, model, sigmas, radius, batched);
  for (size_t j = 0; j < sigmas.size(); ++j) {
    const double single = background_score(query, model, sigmas[j], radius);
    EXPECT_EQ(batched[j], single) << "candidate " << j;
  }
}

TEST(KernelScores, AddingASampleNeverDecreasesTheScore) {
  testing::TestRng rng(404);
  ProcessModel model(16, 16, 5, 3);
  model.set_frame_count(1);
  FeatureVector query;
  query.x = 8.0;
  query.y = 8.0;
  query.appearance = {130.0, 140.0, 150.0, 0, 0, 0};

  const DiagonalCovariance sigma = rgb_sigma(0.75, 3.75);
  double previous = background_score(query, model, sigma, window_radius(0.75));
  EXPECT_EQ(previous, 0.0);
  for (int i = 0; i < 5; ++i) {
    const std::array<double, 3> stored = {rng.uniform(0.0, 255.0),
                                          rng.uniform(0.0, 255.0),
                                          rng.uniform(0.0, 255.0)};
    model.push(8, 8, stored, rng.uniform(0.1, 1.0), i);
    const double next =
        background_score(query, model, sigma, window_radius(0.75));
    EXPECT_GE(next, previous);
    previous = next;
  }
}

// =========================== foreground scores ============================

TEST(ForegroundScore, EmptyModelFallsBackToUniformDensity) {
  ProcessModel fg(8, 8, 5, 3);
  FeatureVector query;
  query.x = 4.0;
  query.y = 4.0;
  query.appearance = {10, 20, 30, 0, 0, 0};
  const double u = 1e-6;
  const double alpha = 0.5;
  const ForegroundScore score = foreground_score(
      query, fg, rgb_sigma(3.0, 3.75), u, alpha, window_radius(3.0));
  EXPECT_EQ(score.kernel, 0.0);
  EXPECT_EQ(score.uniform, u);
  EXPECT_EQ(score.mixed, alpha * u);
}

TEST(ForegroundScore, ComponentsMatchNaiveOracles) {
  testing::TestRng rng(505);
  const double u = 1e-6;
  const double alpha = 0.5;
  for (int trial = 0; trial < 20; ++trial) {
    // Partially filled model. Every pixel keeps at least one sample and
    // weights stay in [0.5, 1], so the anchored query's own sample bounds
    // the kernel mass from below and window truncation stays inside the
    // comparison tolerance. Empty pixels are exercised elsewhere.
    ProcessModel fg(16, 16, 5, 3);
    Image<double> plane = testing::random_color_plane(16, 16, rng);
    for (int y = 0; y < 16; ++y) {
      for (int x = 0; x < 16; ++x) {
        const int count = rng.uniform_int(1, 5);
        for (int s = 0; s < count; ++s) {
          const std::array<double, 3> stored = {
              std::clamp(plane.at(x, y, 0) + 6.0 * rng.gaussian(), 0.0, 255.0),
              std::clamp(plane.at(x, y, 1) + 6.0 * rng.gaussian(), 0.0, 255.0),
              std::clamp(plane.at(x, y, 2) + 6.0 * rng.gaussian(), 0.0,
                         255.0)};
          fg.push(x, y, stored, rng.uniform(0.5, 1.0), s);
        }
      }
    }
    fg.set_frame_count(5);

    FeatureVector query = testing::anchored_query(fg, rng);
    const DiagonalCovariance sigma = rgb_sigma(3.0, 3.75);
    const ForegroundScore score =
        foreground_score(query, fg, sigma, u, alpha, window_radius(3.0));

    const double naive_u = testing::naive_uniform_score(query, fg, 3.0, u);
    EXPECT_NEAR(score.uniform, naive_u, naive_u * 1e-4 + 1e-300);
    const double naive_k = testing::naive_kernel_score(query, fg, sigma);
    EXPECT_NEAR(score.kernel, naive_k, naive_k * 1e-4 + 1e-300);
    EXPECT_NEAR(score.mixed,
                alpha * score.uniform + (1.0 - alpha) * score.kernel, 1e-18);
  }
}

// =============================== posterior ================================

TEST(Posterior, AlgebraicProperties) {
  testing::TestRng rng(606);
  for (int i = 0; i < 10000; ++i) {
    const double sb =
        rng.uniform() < 0.1 ? 0.0 : std::exp(rng.uniform(-200.0, 5.0));
    const double sf =
        rng.uniform() < 0.1 ? 0.0 : std::exp(rng.uniform(-200.0, 5.0));
    const double p_bg = posterior_bg(sb, sf);
    const double p_fg = posterior_bg(sf, sb);
    ASSERT_GE(p_bg, 0.0);
    ASSERT_LE(p_bg, 1.0);
    if (sb == 0.0 && sf == 0.0) {
      ASSERT_EQ(p_bg, 0.0);
      ASSERT_EQ(p_fg, 0.0);
    } else {
      ASSERT_DOUBLE_EQ(p_bg + p_fg, 1.0);
      if (sb == sf) {
        ASSERT_DOUBLE_EQ(p_bg, 0.5);
      }
    }
  }
}

TEST(Posterior, EqualScoresGiveHalf) {
  EXPECT_DOUBLE_EQ(posterior_bg(0.125, 0.125), 0.5);
  EXPECT_DOUBLE_EQ(posterior_bg(1e-200, 1e-200), 0.5);
}

TEST(Posterior, BothZeroIsForeground) {
  EXPECT_EQ(posterior_bg(0.0, 0.0), 0.0);
}

TEST(DiagonalCovarianceChecks, ValidateRejectsNonPositive) {
  DiagonalCovariance sigma = rgb_sigma(0.75, 3.75);
  EXPECT_NO_THROW(sigma.validate());
  sigma.spatial = 0.0;
  EXPECT_THROW(sigma.validate(), std::invalid_argument);
  sigma = rgb_sigma(0.75, -1.0);
  EXPECT_THROW(sigma.validate(), std::invalid_argument);
}

TEST(DiagonalCovarianceChecks, DimsFollowMode) {
  EXPECT_EQ(rgb_sigma(0.75, 3.75).dims(), 5);
  EXPECT_EQ(lab_sigma(0.75, 2.5, 1.0, 0.75).dims(), 8);
}

TEST(DiagonalCovarianceChecks, NormalizerIntegratesKernelGroups) {
  // exp(log_normalizer) must equal the product of the per-dimension
  // Gaussian normalizers.
  const DiagonalCovariance rgb = rgb_sigma(0.75, 3.75);
  double expected = 1.0;
  for (double v : {0.75, 0.75, 3.75, 3.75, 3.75})
    expected /= std::sqrt(2.0 * std::numbers::pi * v);
  EXPECT_NEAR(std::exp(rgb.log_normalizer()), expected, expected * 1e-12);

  const DiagonalCovariance lab = lab_sigma(0.25, 2.5, 1.5, 0.75);
  expected = 1.0;
  for (double v : {0.25, 0.25, 2.5, 1.5, 1.5, 0.75, 0.75, 0.75})
    expected /= std::sqrt(2.0 * std::numbers::pi * v);
  EXPECT_NEAR(std::exp(lab.log_normalizer()), expected, expected * 1e-12);
}

}  // namespace
}  // namespace vks
