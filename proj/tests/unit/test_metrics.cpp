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
#include "sbd/errors.hpp"
#include "sbd/metrics.hpp"

namespace sbd {
namespace {

Signal rotate(const Signal& x, std::size_t s) {
  std::vector<double> out(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) out[(n + s) % x.size()] = x[n];
  return Signal(out);
}

TEST(Mae, Examples) {
  EXPECT_EQ(mae(Signal{1, 2}, Signal{1, 2}), 0.0);
  EXPECT_EQ(mae(Signal{1, 2}, Signal{0, 2}), 0.5);
  EXPECT_THROW(mae(Signal{1}, Signal{1, 2}), DimensionMismatch);
  std::mt19937_64 rng(71);
  const Signal a = oracle::gaussian_signal(50, rng), b = oracle::gaussian_signal(50, rng);
  double s = 0.0;
  for (std::size_t i = 0; i < 50; ++i) s += std::abs(a[i] - b[i]);
  EXPECT_NEAR(mae(a, b), s / 50.0, 1e-15);
}

TEST(AlignedError, RecoversShift) {
  std::mt19937_64 rng(72);
  const Signal x = oracle::gaussian_signal(40, rng);
  const AlignedError ae = aligned_error(x, rotate(x, 7), false);
  EXPECT_EQ(ae.best_shift, 7u);
  EXPECT_EQ(ae.mse_db, -kDbClamp);
}

TEST(AlignedError, RemovesScale) {
  std::mt19937_64 rng(73);
  const Signal x = oracle::gaussian_signal(30, rng);
  const AlignedError ae = aligned_error(x, x.scaled(2.0), true);
  EXPECT_NEAR(ae.best_scale, 0.5, 1e-15);
  EXPECT_LT(ae.mse_db, -250.0);
}

TEST(AlignedError, MatchesBruteForce) {
  std::mt19937_64 rng(74);
  const std::size_t m = 25;
  const Signal x = oracle::gaussian_signal(m, rng), y = oracle::gaussian_signal(m, rng);
  for (bool scale : {false, true}) {
    double best = 1e300;
    for (std::size_t s = 0; s < m; ++s) {
      Eigen::VectorXd r(m);
      for (std::size_t n = 0; n < m; ++n) r[static_cast<Eigen::Index>(n)] = y[(n + s) % m];
      const double c = scale ? x.vec().dot(r) / r.squaredNorm() : 1.0;
      best = std::min(best, (x.vec() - c * r).squaredNorm());
    }
    const AlignedError ae = aligned_error(x, y, scale);
    EXPECT_NEAR(ae.mse_ratio, best / x.squared_norm(), 1e-13);
    EXPECT_NEAR(std::pow(10.0, ae.mse_db / 10.0), ae.mse_ratio, 1e-12 * ae.mse_ratio);
    EXPECT_NEAR(std::pow(10.0, ae.mae_db / 20.0), ae.mae_ratio, 1e-12 * ae.mae_ratio);
  }
}

TEST(AlignedError, InvariantToRotationAndScale) {
  std::mt19937_64 rng(75);
  const Signal x = oracle::gaussian_signal(20, rng), y = oracle::gaussian_signal(20, rng);
  const double base = aligned_error(x, y, true).mse_ratio;
  for (std::size_t s : {1u, 5u, 19u}) EXPECT_NEAR(aligned_error(x, rotate(y, s), true).mse_ratio, base, 1e-13);
  EXPECT_NEAR(aligned_error(x, y.scaled(-3.5), true).mse_ratio, base, 1e-13);
}

TEST(AlignedError, ZeroReferenceRejected) {
  EXPECT_THROW(aligned_error(Signal::zeros(4), Signal{1, 2, 3, 4}, true), InvalidArgument);
}

TEST(Support, OneToOneWithinTolerance) {
  EXPECT_EQ(support_matches({10, 20, 30}, {11, 19, 40}, 1), 2u);
  EXPECT_EQ(support_matches({10, 11}, {10}, 1), 1u);
  EXPECT_EQ(support_matches({10, 11}, {10, 12}, 1), 2u);
  std::vector<double> x(50, 0.0);
  x[3] = 1.0;
  x[30] = -2.0;
  x[31] = 0.5;
  EXPECT_EQ(top_k_indices(Signal(x), 2), (std::vector<std::size_t>{30, 3}));
}

TEST(Snr, Improvement) {
  const Signal clean{1, 2, 3, 4};
  const Signal noisy{1.1, 2.0, 2.9, 4.0};
  EXPECT_EQ(snr_improvement_db(noisy, clean, noisy), 0.0);
  EXPECT_NEAR(snr_improvement_db(noisy, clean, clean) + snr_db(clean, noisy), kDbClamp, 1e-12);
  // Halving the noise energy: scale the noise by 1/sqrt(2).
  std::vector<double> half(4);
  for (std::size_t i = 0; i < 4; ++i) half[i] = clean[i] + (noisy[i] - clean[i]) / std::sqrt(2.0);
  EXPECT_NEAR(snr_improvement_db(noisy, clean, Signal(half)), 10.0 * std::log10(2.0), 1e-12);
}

TEST(Sparsity, L1OverL2) {
  EXPECT_NEAR(l1_over_l2(Signal{0, 3, 0, -4}), 7.0 / 5.0, 1e-15);
  EXPECT_THROW(l1_over_l2(Signal::zeros(3)), InvalidArgument);
}

}  // namespace
}  // namespace sbd
