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

#include "sbd/costs.hpp"

#include <cmath>
#include <string>

#include "sbd/convolution.hpp"
#include "sbd/errors.hpp"

namespace sbd {

namespace {

void check_p(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("p must lie in (0, 1]");
}

void check_dims(const Signal& y, const Signal& h, Eigen::Index m) {
  if (y.size() != h.size() + static_cast<std::size_t>(m) - 1)
    throw DimensionMismatch("len(y) = " + std::to_string(y.size()) +
                            " but len(h) + len(e) - 1 = " +
                            std::to_string(h.size() + static_cast<std::size_t>(m) - 1));
}

Eigen::VectorXd residual(const Signal& y, const Signal& h,
                         const Eigen::Ref<const Eigen::VectorXd>& e) {
  const ConvOperator op(h, static_cast<std::size_t>(e.size()));
  return op.apply(e) - y.vec();
}

}  // namespace

PenaltyParams::PenaltyParams(double p, double delta, double epsilon)
    : p_(p), delta_(delta), epsilon_(epsilon) {
  check_p(p);
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw InvalidArgument("delta must be >= 0");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InvalidArgument("epsilon must be > 0");
}

double lp_norm_p(const Eigen::Ref<const Eigen::VectorXd>& e, double p) {
  check_p(p);
  double s = 0.0;
  for (Eigen::Index i = 0; i < e.size(); ++i) s += std::pow(std::abs(e[i]), p);
  return s;
}

double lp_norm_p(const Signal& e, double p) { return lp_norm_p(e.vec(), p); }

double lp_eps(const Eigen::Ref<const Eigen::VectorXd>& e, const PenaltyParams& params) {
  const double half_p = params.p() / 2.0;
  double s = 0.0;
  for (Eigen::Index i = 0; i < e.size(); ++i) s += std::pow(e[i] * e[i] + params.epsilon(), half_p);
  return s;
}

double lp_eps(const Signal& e, const PenaltyParams& params) { return lp_eps(e.vec(), params); }

CostPair cost_pair(const Signal& y, const Signal& h, const Eigen::Ref<const Eigen::VectorXd>& e,
                   const PenaltyParams& params) {
  check_dims(y, h, e.size());
  CostPair c;
  c.data_term = residual(y, h, e).squaredNorm();
  c.penalty_exact = lp_norm_p(e, params.p());
  c.penalty_eps = lp_eps(e, params);
  c.f_exact = c.data_term + params.delta() * c.penalty_exact;
  c.f_eps = c.data_term + params.delta() * c.penalty_eps;
  return c;
}

CostPair cost_pair(const Signal& y, const Signal& h, const Signal& e, const PenaltyParams& params) {
  return cost_pair(y, h, e.vec(), params);
}

Eigen::VectorXd irls_weights(const Eigen::Ref<const Eigen::VectorXd>& e,
                             const PenaltyParams& params) {
  const double expo = params.p() / 2.0 - 1.0;
  Eigen::VectorXd w(e.size());
  for (Eigen::Index i = 0; i < e.size(); ++i)
    w[i] = params.p() * std::pow(e[i] * e[i] + params.epsilon(), expo);
  return w;
}

Signal irls_weights(const Signal& e, const PenaltyParams& params) {
  return Signal(Eigen::VectorXd(irls_weights(e.vec(), params)));
}

Eigen::VectorXd cost_gradient(const Signal& y, const Signal& h,
                              const Eigen::Ref<const Eigen::VectorXd>& e,
                              const PenaltyParams& params) {
  check_dims(y, h, e.size());
  const ConvOperator op(h, static_cast<std::size_t>(e.size()));
  const Eigen::VectorXd w = irls_weights(e, params);
  return 2.0 * op.adjoint(residual(y, h, e)) + params.delta() * w.cwiseProduct(e);
}

double frozen_stationarity_residual(const Signal& y, const Signal& h,
                                    const Eigen::Ref<const Eigen::VectorXd>& e,
                                    const Eigen::Ref<const Eigen::VectorXd>& weights_at,
                                    const PenaltyParams& params) {
  check_dims(y, h, e.size());
  if (weights_at.size() != e.size()) throw DimensionMismatch("weight anchor length mismatch");
  const ConvOperator op(h, static_cast<std::size_t>(e.size()));
  const Eigen::VectorXd w = irls_weights(weights_at, params);
  return (op.adjoint(residual(y, h, e)) + 0.5 * params.delta() * w.cwiseProduct(e)).norm();
}

double stationarity_residual(const Signal& y, const Signal& h,
                             const Eigen::Ref<const Eigen::VectorXd>& e,
                             const PenaltyParams& params) {
  return frozen_stationarity_residual(y, h, e, e, params);
}

double stationarity_residual(const Signal& y, const Signal& h, const Signal& e,
                             const PenaltyParams& params) {
  return stationarity_residual(y, h, e.vec(), params);
}

}  // namespace sbd
