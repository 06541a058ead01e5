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

#include "sbd/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "sbd/errors.hpp"
#include "sbd/kernels.hpp"

namespace sbd {

Signal convolve(const Signal& h, const Signal& e) {
  std::vector<double> out(h.size() + e.size() - 1);
  kernels::convolve_full(h.span(), e.span(), out);
  return Signal(std::move(out));
}

Signal autocorrelation(const Signal& h) {
  const std::size_t n = h.size();
  std::vector<double> r(n);
  for (std::size_t lag = 0; lag < n; ++lag)
    r[lag] = kernels::dot(h.span().subspan(0, n - lag), h.span().subspan(lag));
  return Signal(std::move(r));
}

ConvOperator::ConvOperator(Signal kernel, std::size_t input_len)
    : kernel_(std::move(kernel)), input_len_(input_len) {
  if (input_len_ < 1) throw InvalidArgument("operator input length must be at least 1");
}

ConvOperator make_operator(const Signal& kernel, std::size_t input_len) {
  return ConvOperator(kernel, input_len);
}

Signal ConvOperator::apply(const Signal& x) const {
  if (x.size() != input_len_)
    throw DimensionMismatch("operator expects input of length " + std::to_string(input_len_) +
                            ", got " + std::to_string(x.size()));
  return convolve(kernel_, x);
}

Eigen::VectorXd ConvOperator::apply(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (static_cast<std::size_t>(x.size()) != input_len_)
    throw DimensionMismatch("operator input length mismatch");
  Eigen::VectorXd out(static_cast<Eigen::Index>(output_len()));
  kernels::active().convolve_full(kernel_.data(), kernel_.size(), x.data(), input_len_,
                                  out.data());
  return out;
}

Signal ConvOperator::adjoint(const Signal& y) const {
  return Signal(Eigen::VectorXd(adjoint(Eigen::VectorXd(y.vec()))));
}

Eigen::VectorXd ConvOperator::adjoint(const Eigen::Ref<const Eigen::VectorXd>& y) const {
  if (static_cast<std::size_t>(y.size()) != output_len())
    throw DimensionMismatch("adjoint expects input of length " + std::to_string(output_len()));
  Eigen::VectorXd out(static_cast<Eigen::Index>(input_len_));
  kernels::active().correlate_valid(kernel_.data(), kernel_.size(), y.data(), output_len(),
                                    out.data());
  return out;
}

Eigen::MatrixXd ConvOperator::materialize() const {
  const auto n = static_cast<Eigen::Index>(output_len());
  const auto m = static_cast<Eigen::Index>(input_len_);
  const auto l = static_cast<Eigen::Index>(kernel_.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, m);
  for (Eigen::Index s = 0; s < m; ++s) a.col(s).segment(s, l) = kernel_.vec();
  return a;
}

Eigen::MatrixXd ConvOperator::gram() const {
  const auto m = static_cast<Eigen::Index>(input_len_);
  const Signal r = autocorrelation(kernel_);
  const auto l = static_cast<Eigen::Index>(r.size());
  Eigen::MatrixXd g(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) {
      const Eigen::Index lag = i > j ? i - j : j - i;
      g(i, j) = lag < l ? r[static_cast<std::size_t>(lag)] : 0.0;
    }
  }
  return g;
}

SingularRange singular_range(const ConvOperator& op) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(op.materialize());
  const auto& s = svd.singularValues();
  return {s.minCoeff(), s.maxCoeff()};
}

RieszReport riesz_report(const Signal& kernel, std::size_t input_len, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw InvalidArgument("eta must lie in (0, 1]");
  if (input_len < 1) throw InvalidArgument("input length must be at least 1");
  const double scale = kernel.norm2();
  if (scale == 0.0) throw InvalidArgument("kernel is identically zero");

  const Signal unit = kernel.scaled(1.0 / scale);
  const Signal r = autocorrelation(unit);
  const std::size_t lags = std::min(unit.size(), input_len);  // lags that appear in H^T H

  RieszReport rep;
  rep.eta = eta;
  rep.kernel_scale = scale;

  // Row i of the Gram matrix sees lags 1..i to the left and 1..M-1-i to the right.
  std::vector<double> prefix(lags, 0.0);
  for (std::size_t l = 1; l < lags; ++l) prefix[l] = prefix[l - 1] + std::abs(r[l]);
  auto abs_sum_upto = [&](std::size_t k) { return prefix[std::min(k, lags - 1)]; };
  double max_row = 0.0;
  for (std::size_t i = 0; i < input_len; ++i)
    max_row = std::max(max_row, abs_sum_upto(i) + abs_sum_upto(input_len - 1 - i));
  rep.gersh_lower = 1.0 - max_row;
  rep.gersh_upper = 1.0 + max_row;

  rep.autocorr_abs_sum = prefix[lags - 1];
  rep.eta_sufficient = rep.autocorr_abs_sum <= (1.0 - eta) / 2.0;
  rep.autocorr_half_sum = abs_sum_upto(input_len / 2);  // ceil((M-1)/2) == floor(M/2)
  rep.eta_sufficient_half = rep.autocorr_half_sum <= (1.0 - eta) / 2.0;

  const SingularRange sv = singular_range(ConvOperator(unit, input_len));
  rep.svd_lower = sv.sigma_min * sv.sigma_min;
  rep.svd_upper = sv.sigma_max * sv.sigma_max;
  return rep;
}

}  // namespace sbd
