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

#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library's numerical code: convolution is a double loop, matrices are
// built entry by entry from their definitions.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "sbd/signal.hpp"

namespace sbd::oracle {

inline std::vector<double> naive_convolve(const std::vector<double>& h,
                                          const std::vector<double>& e) {
  std::vector<double> out(h.size() + e.size() - 1, 0.0);
  for (std::size_t i = 0; i < h.size(); ++i)
    for (std::size_t j = 0; j < e.size(); ++j) out[i + j] += h[i] * e[j];
  return out;
}

// N x M with H(n, m) = h[n - m].
inline Eigen::MatrixXd conv_matrix(const std::vector<double>& h, std::size_t m) {
  const std::size_t n = h.size() + m - 1;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(m));
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t k = 0; k < h.size(); ++k)
      H(static_cast<Eigen::Index>(c + k), static_cast<Eigen::Index>(c)) = h[k];
  return H;
}

inline Eigen::MatrixXd conv_matrix(const Signal& h, std::size_t m) {
  return conv_matrix(h.samples(), m);
}

inline std::vector<double> gaussian_vector(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

inline Signal gaussian_signal(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  return Signal(gaussian_vector(n, rng, scale));
}

inline Signal unit_norm(const Signal& s) { return s.scaled(1.0 / s.norm2()); }

inline Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Exact squared singular values from the dense Gram matrix.
inline Eigen::VectorXd gram_eigenvalues(const std::vector<double>& h, std::size_t m) {
  const Eigen::MatrixXd H = conv_matrix(h, m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.transpose() * H);
  return es.eigenvalues();
}

// F_eps(h, e) written out from its definition.
inline double f_eps(const Signal& y, const Signal& h, const Eigen::VectorXd& e, double p,
                    double delta, double eps) {
  const Eigen::MatrixXd H = conv_matrix(h, static_cast<std::size_t>(e.size()));
  double pen = 0.0;
  for (Eigen::Index i = 0; i < e.size(); ++i) pen += std::pow(e[i] * e[i] + eps, p / 2.0);
  return (y.vec() - H * e).squaredNorm() + delta * pen;
}

inline double f_exact(const Signal& y, const Signal& h, const Eigen::VectorXd& e, double p,
                      double delta) {
  const Eigen::MatrixXd H = conv_matrix(h, static_cast<std::size_t>(e.size()));
  double pen = 0.0;
  for (Eigen::Index i = 0; i < e.size(); ++i) pen += std::pow(std::abs(e[i]), p);
  return (y.vec() - H * e).squaredNorm() + delta * pen;
}

}  // namespace sbd::oracle
