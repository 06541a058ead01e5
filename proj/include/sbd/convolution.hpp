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

#include <cstddef>

#include <Eigen/Core>

#include "sbd/signal.hpp"

namespace sbd {

/// Full linear convolution, length L + M - 1.
Signal convolve(const Signal& h, const Signal& e);

/// r(l) = sum_n h[n] h[n+l] for l = 0 .. L-1.
Signal autocorrelation(const Signal& h);

/// The N x M linear-convolution matrix of a kernel, applied matrix-free.
///
/// Column s is the kernel shifted down by s and zero padded, so apply() is
/// plain convolution and adjoint() is correlation cropped to the input
/// length. The same type serves as H (kernel = filter, input = excitation)
/// and as E (kernel = excitation, input = filter).
class ConvOperator {
 public:
  ConvOperator(Signal kernel, std::size_t input_len);

  const Signal& kernel() const { return kernel_; }
  std::size_t input_len() const { return input_len_; }
  std::size_t output_len() const { return kernel_.size() + input_len_ - 1; }

  Signal apply(const Signal& x) const;
  Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  Signal adjoint(const Signal& y) const;
  Eigen::VectorXd adjoint(const Eigen::Ref<const Eigen::VectorXd>& y) const;

  /// Dense N x M matrix. Only used for spectral analysis and tests.
  Eigen::MatrixXd materialize() const;

  /// H^T H, the symmetric Toeplitz Gram matrix built from the autocorrelation.
  Eigen::MatrixXd gram() const;

 private:
  Signal kernel_;
  std::size_t input_len_;
};

ConvOperator make_operator(const Signal& kernel, std::size_t input_len);

struct SingularRange {
  double sigma_min = 0.0;
  double sigma_max = 0.0;
};

/// Extreme singular values of the materialized operator.
SingularRange singular_range(const ConvOperator& op);

/// Riesz-bound analysis of a kernel's convolution operator.
///
/// All quantities refer to the unit-norm version of the kernel; kernel_scale
/// records the norm that was divided out. The Gerschgorin bounds use the
/// exact per-row off-diagonal sums of H^T H, so they are valid for any input
/// length. eta_sufficient tests sum_{l>=1} |r(l)| <= (1 - eta) / 2 over the
/// lags that actually occur in the Gram matrix; the half-range variant sums
/// only lags 1 .. ceil((M-1)/2).
struct RieszReport {
  double gersh_lower = 0.0;
  double gersh_upper = 0.0;
  double svd_lower = 0.0;  // sigma_min^2
  double svd_upper = 0.0;  // sigma_max^2
  double eta = 0.0;
  bool eta_sufficient = false;
  double autocorr_abs_sum = 0.0;
  double autocorr_half_sum = 0.0;
  bool eta_sufficient_half = false;
  double kernel_scale = 1.0;
};

RieszReport riesz_report(const Signal& kernel, std::size_t input_len, double eta);

}  // namespace sbd
