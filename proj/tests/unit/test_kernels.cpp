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
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sbd/kernels.hpp"

namespace sbd {
namespace {

using kernels::Isa;

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

TEST(Kernels, ScalarConvolveMatchesDoubleLoop) {
  std::mt19937_64 rng(11);
  const auto& t = kernels::scalar_table();
  for (std::size_t lh : {1u, 2u, 7u, 33u}) {
    for (std::size_t le : {1u, 5u, 64u}) {
      const auto h = oracle::gaussian_vector(lh, rng);
      const auto e = oracle::gaussian_vector(le, rng);
      const auto want = oracle::naive_convolve(h, e);
      std::vector<double> got(want.size(), 99.0);
      t.convolve_full(h.data(), lh, e.data(), le, got.data());
      for (std::size_t i = 0; i < want.size(); ++i)
        EXPECT_NEAR(got[i], want[i], 1e-12 * (1.0 + max_abs(want)));
    }
  }
}

TEST(Kernels, ScalarCorrelateIsAdjointOfConvolve) {
  std::mt19937_64 rng(12);
  const auto& t = kernels::scalar_table();
  const std::size_t lh = 9, le = 20, ly = lh + le - 1;
  const auto h = oracle::gaussian_vector(lh, rng);
  const auto y = oracle::gaussian_vector(ly, rng);
  std::vector<double> got(le);
  t.correlate_valid(h.data(), lh, y.data(), ly, got.data());
  const Eigen::VectorXd want = oracle::conv_matrix(h, le).transpose() * oracle::to_eigen(y);
  for (std::size_t i = 0; i < le; ++i) EXPECT_NEAR(got[i], want[static_cast<Eigen::Index>(i)], 1e-12);
}

class SimdEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!kernels::isa_available(Isa::avx2)) GTEST_SKIP() << "AVX2 not available on this host";
  }
};

TEST_F(SimdEquivalence, DotAndAxpy) {
  std::mt19937_64 rng(13);
  const auto& s = kernels::scalar_table();
  const auto& v = kernels::avx2_table();
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 15u, 16u, 17u, 100u, 1023u}) {
    const auto a = oracle::gaussian_vector(n, rng);
    const auto b = oracle::gaussian_vector(n, rng);
    double scale = 1.0;
    for (std::size_t i = 0; i < n; ++i) scale += std::abs(a[i] * b[i]);
    EXPECT_NEAR(s.dot(a.data(), b.data(), n), v.dot(a.data(), b.data(), n), 1e-13 * scale);

    auto y1 = b, y2 = b;
    s.axpy(0.37, a.data(), y1.data(), n);
    v.axpy(0.37, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y1[i], y2[i], 1e-15 * (1.0 + std::abs(y1[i])));
  }
}

TEST_F(SimdEquivalence, ConvolveAndCorrelate) {
  std::mt19937_64 rng(14);
  const auto& s = kernels::scalar_table();
  const auto& v = kernels::avx2_table();
  for (std::size_t lh : {1u, 3u, 4u, 8u, 13u, 100u}) {
    for (std::size_t le : {1u, 2u, 7u, 64u, 200u}) {
      const auto h = oracle::gaussian_vector(lh, rng);
      const auto e = oracle::gaussian_vector(le, rng);
      std::vector<double> c1(lh + le - 1), c2(lh + le - 1);
      s.convolve_full(h.data(), lh, e.data(), le, c1.data());
      v.convolve_full(h.data(), lh, e.data(), le, c2.data());
      const double tol = 1e-12 * (1.0 + max_abs(c1));
      for (std::size_t i = 0; i < c1.size(); ++i) ASSERT_NEAR(c1[i], c2[i], tol);

      std::vector<double> r1(le), r2(le);
      s.correlate_valid(h.data(), lh, c1.data(), c1.size(), r1.data());
      v.correlate_valid(h.data(), lh, c1.data(), c1.size(), r2.data());
      const double rtol = 1e-12 * (1.0 + max_abs(r1));
      for (std::size_t i = 0; i < le; ++i) ASSERT_NEAR(r1[i], r2[i], rtol);
    }
  }
}

TEST(Kernels, ActiveTableIsAvailable) {
  EXPECT_TRUE(kernels::isa_available(kernels::active().isa));
  EXPECT_TRUE(kernels::isa_available(Isa::scalar));
  EXPECT_EQ(kernels::isa_name(Isa::scalar), "scalar");
}

}  // namespace
}  // namespace sbd
