// Copyright 2026 The sbd Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sbd/baselines.hpp"
#include "sbd/convolution.hpp"
#include "sbd/errors.hpp"
#include "sbd/metrics.hpp"
#include "sbd/synth.hpp"

namespace sbd {
namespace {

double soft_threshold(double y, double t) {
  return std::copysign(std::max(std::abs(y) - t, 0.0), y);
}

TEST(Lasso, IdentityKernelIsSoftThresholding) {
  const Signal y{1.0, -0.5, 0.05, -0.02, 0.3, 2.0, -1.4, 0.0};
  for (double delta : {0.2, 0.5}) {
    LassoConfig cfg;
    cfg.delta = delta;
    const LassoResult r = lasso_irls(y, Signal{1.0}, cfg);
    for (std::size_t i = 0; i < y.size(); ++i)
      EXPECT_NEAR(r.e[i], soft_threshold(y[i], delta / 2.0), 1e-6) << "i=" << i;
  }
}

TEST(Lasso, ObjectiveNonIncreasing) {
  std::mt19937_64 rng(81);
  const Signal h = oracle::unit_norm(oracle::gaussian_signal(6, rng));
  const Signal y = oracle::gaussian_signal(45, rng);
  LassoConfig cfg;
  cfg.delta = 0.3;
  const LassoResult r = lasso_irls(y, h, cfg);
  ASSERT_GE(r.objective.size(), 2u);
  for (std::size_t k = 1; k < r.objective.size(); ++k)
    EXPECT_LE(r.objective[k], r.objective[k - 1] + 1e-10 * (1.0 + r.objective[k - 1]));
}

TEST(Lasso, HugeDeltaGivesZero) {
  std::mt19937_64 rng(82);
  const Signal h = oracle::gaussian_signal(4, rng);
  const Signal y = oracle::gaussian_signal(20, rng);
  LassoConfig cfg;
  cfg.delta = 1e8;
  EXPECT_LE(lasso_irls(y, h, cfg).e.norm2(), 1e-6);
}

TEST(Lasso, RecoversSparseSupportWithoutNoise) {
  const SynthSpec spec{ImpulseTrain{60, {5, 20, 41}, {1.0, -0.8, 1.2}}, DecayingCosines{{0.3}, {0.5}, 6}, NoNoise{}};
  const Instance inst = make_instance(spec);
  LassoConfig cfg;
  cfg.delta = 1e-3;
  const LassoResult r = lasso_irls(inst.y, inst.h_true, cfg);
  EXPECT_EQ(aligned_error(inst.e_true, r.e, false, 0).support_hits, 3u);
}

TEST(Lasso, ConfigValidation) {
  LassoConfig cfg;
  cfg.delta = 0.0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = LassoConfig{};
  cfg.epsilon_w = 0.0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(Lasso, DimensionMismatch) {
  EXPECT_THROW(lasso_irls(Signal{1.0}, Signal{1.0, 2.0}, LassoConfig{}), DimensionMismatch);
}

TEST(SdmmRule, Examples) {
  EXPECT_NEAR(sdmm_delta_rule(oracle::unit_norm(Signal{1, 2, 3}), 0.01), 0.03, 1e-15);
  EXPECT_EQ(sdmm_delta_rule(Signal{1.0}, 0.0), 0.0);
  EXPECT_NEAR(sdmm_delta_rule(Signal{2.0, 0.0}, 1.0), 6.0, 1e-15);
}

TEST(MatchedLasso, HitsTargetResidual) {
  const Instance inst = make_instance(SynthSpec{ImpulseTrain{80, {5, 30, 60}, {}}, DecayingCosines{{0.2}, {0.4}, 10},
                                                AwgnSigma{0.05, 3}});
  const double target = 2.0 * inst.noise.squared_norm();
  const MatchedLasso ml = lasso_matched_residual(inst.y, inst.h_true, target, LassoConfig{});
  EXPECT_NEAR(ml.residual, target, 1e-3 * target);
  const double r = (convolve(inst.h_true, ml.result.e).vec() - inst.y.vec()).squaredNorm();
  EXPECT_NEAR(r, ml.residual, 1e-12 * r);
}

}  // namespace
}  // namespace sbd
