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

#include "sbd/baselines.hpp"

#include <cmath>

#include <Eigen/Cholesky>

#include "sbd/convolution.hpp"
#include "sbd/errors.hpp"

namespace sbd {

namespace {

double objective(const ConvOperator& op, const Signal& y, const Eigen::VectorXd& e, double delta) {
  return (op.apply(e) - y.vec()).squaredNorm() + delta * e.lpNorm<1>();
}

Eigen::VectorXd solve_weighted(const Eigen::MatrixXd& gram, const Eigen::VectorXd& rhs,
                               const Eigen::VectorXd& diag) {
  Eigen::MatrixXd a = gram;
  a.diagonal() += diag;
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) throw NumericalFailure("LASSO reweighted system is singular");
  return llt.solve(rhs);
}

}  // namespace

void LassoConfig::validate() const {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InvalidArgument("LASSO delta must be > 0");
  if (max_iters < 1) throw InvalidArgument("max_iters must be >= 1");
  if (!(tol > 0.0)) throw InvalidArgument("tol must be > 0");
  if (!(epsilon_w > 0.0)) throw InvalidArgument("epsilon_w must be > 0");
}

LassoResult lasso_irls(const Signal& y, const Signal& h, const LassoConfig& cfg,
                       const std::optional<Signal>& start) {
  cfg.validate();
  if (y.size() < h.size()) throw DimensionMismatch("observation shorter than the filter");
  const std::size_t m = y.size() - h.size() + 1;
  const ConvOperator op(h, m);
  const Eigen::MatrixXd gram = op.gram();
  const Eigen::VectorXd rhs = op.adjoint(y.vec());
  const double half = 0.5 * cfg.delta;

  Eigen::VectorXd e;
  if (start) {
    if (start->size() != m) throw DimensionMismatch("LASSO start has the wrong length");
    e = start->vec();
  } else {
    e = solve_weighted(gram, rhs, Eigen::VectorXd::Constant(static_cast<Eigen::Index>(m), half));
  }

  LassoResult out{Signal::zeros(1), {objective(op, y, e, cfg.delta)}, 0, false};
  for (std::size_t it = 0; it < cfg.max_iters; ++it) {
    const Eigen::VectorXd d = half * (e.cwiseAbs().array() + cfg.epsilon_w).inverse().matrix();
    Eigen::VectorXd next = solve_weighted(gram, rhs, d);
    if (!next.allFinite()) throw NumericalFailure("LASSO iterate is not finite");
    const double denom = e.norm();
    const double change = denom > 0.0 ? (next - e).norm() / denom : next.norm();
    e = std::move(next);
    ++out.iterations;
    out.objective.push_back(objective(op, y, e, cfg.delta));
    if (change < cfg.tol) {
      out.converged = true;
      break;
    }
  }
  out.e = Signal(e);
  return out;
}

double sdmm_delta_rule(const Signal& h, double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidArgument("sigma must be >= 0");
  return 3.0 * sigma * h.norm2();
}

MatchedLasso lasso_matched_residual(const Signal& y, const Signal& h, double target_residual,
                                    const LassoConfig& base, double rel_tol,
                                    std::size_t max_bisections) {
  if (!(target_residual > 0.0)) throw InvalidArgument("target residual must be > 0");
  const std::size_t m = y.size() - h.size() + 1;
  const ConvOperator op(h, m);
  // Cold starts: reweighting cannot revive entries pinned near zero by a
  // warm start from a larger delta within a reasonable iteration budget.
  auto run = [&](double delta) {
    LassoConfig cfg = base;
    cfg.delta = delta;
    MatchedLasso r{lasso_irls(y, h, cfg), delta, 0.0};
    r.residual = (op.apply(r.result.e.vec()) - y.vec()).squaredNorm();
    return r;
  };

  // log-space bisection between a tiny weight and the all-zero threshold
  double lo = std::log(1e-10);
  double hi = std::log(2.0 * op.adjoint(y.vec()).cwiseAbs().maxCoeff() + 1e-300);
  if (!(hi > lo)) throw InvalidArgument("observation carries no signal");
  MatchedLasso best = run(std::exp(0.5 * (lo + hi)));
  for (std::size_t i = 0; i < max_bisections; ++i) {
    if (std::abs(best.residual - target_residual) <= rel_tol * target_residual) break;
    if (best.residual > target_residual) hi = std::log(best.delta);
    else lo = std::log(best.delta);
    best = run(std::exp(0.5 * (lo + hi)));
  }
  return best;
}

}  // namespace sbd
