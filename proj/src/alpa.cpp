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

#include "sbd/alpa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "sbd/kernels.hpp"

namespace sbd {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void check_lengths(const Signal& y, const Signal& h, const Signal& e) {
  if (y.size() != h.size() + e.size() - 1)
    throw DimensionMismatch("len(y) = " + std::to_string(y.size()) +
                            " but len(h) + len(e) - 1 = " +
                            std::to_string(h.size() + e.size() - 1));
}

Eigen::VectorXd spd_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() == Eigen::Success) {
    Eigen::VectorXd x = llt.solve(b);
    if (x.allFinite()) return x;
  }
  // Semidefinite (e.g. delta = 0 with a rank-deficient Gram): pivoted LDL^T.
  Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  if (ldlt.info() != Eigen::Success) throw NumericalFailure(std::string(what) + ": factorization failed");
  Eigen::VectorXd x = ldlt.solve(b);
  if (!x.allFinite()) throw NumericalFailure(std::string(what) + ": system is singular");
  return x;
}

double relative_step(const Eigen::VectorXd& next, const Eigen::VectorXd& prev) {
  const double denom = prev.norm();
  if (denom == 0.0) return next.norm() == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return (next - prev).norm() / denom;
}

bool prefer_mil(const Eigen::VectorXd& e, const PenaltyParams& params) {
  return params.delta() > 0.0 && e.cwiseAbs2().minCoeff() < params.epsilon();
}

EStepResult run_irls(const Signal& y, const Signal& h, const Signal& e_prev, const AlpaConfig& cfg,
                     SolvePath mode) {
  check_lengths(y, h, e_prev);
  const PenaltyParams& pp = cfg.penalty;
  if (mode == SolvePath::mil && !(pp.delta() > 0.0))
    throw InvalidArgument("the MIL path needs delta > 0");

  const ConvOperator op(h, e_prev.size());
  Eigen::VectorXd e = e_prev.vec();
  EStepResult out{Signal::zeros(1), {}, 0, 0};
  for (std::size_t j = 0; j < cfg.inner_iters; ++j) {
    const bool use_mil =
        mode == SolvePath::mil || (mode == SolvePath::automatic && prefer_mil(e, pp));
    Eigen::VectorXd next = use_mil ? solve_reweighted_mil(op, y, majorizer_inverse_curvature(e, pp))
                                   : solve_reweighted_direct(op, y, majorizer_curvature(e, pp));
    if (!next.allFinite()) throw NumericalFailure("e-step produced non-finite values");
    out.mil_solves += use_mil ? 1 : 0;
    ++out.iterations;
    out.residuals.push_back(stationarity_residual(y, h, next, pp));
    const double change = relative_step(next, e);
    e = std::move(next);
    if (change < cfg.inner_tol) break;
  }
  out.e = Signal(e);
  return out;
}

// Secular-equation solve for the sphere-constrained least squares problem.
// With A = V diag(lambda) V^T and c = V^T b, the minimizer is
// h = (A - mu I)^-1 b with mu < lambda_min chosen so that ||h|| = 1.
Eigen::VectorXd sphere_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const Eigen::Index n = a.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  if (eig.info() != Eigen::Success) throw NumericalFailure("h-step eigendecomposition failed");
  const Eigen::VectorXd& lam = eig.eigenvalues();  // ascending
  const Eigen::MatrixXd& v = eig.eigenvectors();
  const Eigen::VectorXd c = v.transpose() * b;
  const double lam_min = lam[0];
  const double scale = std::max({std::abs(lam[n - 1]), b.norm(), std::numeric_limits<double>::min()});
  const double tie = 64.0 * std::numeric_limits<double>::epsilon() * scale;

  // gaps g_i = lambda_i - lambda_min >= 0; bottom eigenspace = {g_i <= tie}.
  Eigen::VectorXd g = (lam.array() - lam_min).matrix();
  double bottom_mass = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (g[i] <= tie) bottom_mass += c[i] * c[i];

  auto norm_at = [&](double t) {  // ||h|| with mu = lambda_min - t
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = g[i] + t;
      s += c[i] * c[i] / (d * d);
    }
    return std::sqrt(s);
  };

  if (std::sqrt(bottom_mass) <= tie) {
    // b is (numerically) orthogonal to the bottom eigenspace. If the rest of
    // the solution at mu = lambda_min has norm < 1 we are in the hard case.
    double rest = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (g[i] > tie) rest += c[i] * c[i] / (g[i] * g[i]);
    if (rest <= 1.0) {
      Eigen::VectorXd coef = Eigen::VectorXd::Zero(n);
      for (Eigen::Index i = 0; i < n; ++i)
        if (g[i] > tie) coef[i] = c[i] / g[i];
      coef[0] = std::sqrt(std::max(0.0, 1.0 - rest));
      Eigen::VectorXd h = v * coef;
      return h / h.norm();
    }
    for (Eigen::Index i = 0; i < n; ++i)
      if (g[i] <= tie) g[i] = 0.0;
  }

  // norm_at(t) decreases from +inf (or the hard-case value) to 0 on t > 0.
  // Bracket the root of 1/norm_at(t) - 1 and refine with safeguarded Newton.
  double lo = 0.0;
  double hi = std::max(b.norm(), std::numeric_limits<double>::min());
  while (norm_at(hi) > 1.0) hi *= 2.0;
  double t = hi;
  for (int it = 0; it < 200; ++it) {
    const double phi = norm_at(t);
    if (phi > 1.0) lo = t; else hi = t;
    if (std::abs(phi - 1.0) <= 4.0 * std::numeric_limits<double>::epsilon()) break;
    double s3 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = g[i] + t;
      s3 += c[i] * c[i] / (d * d * d);
    }
    // psi(t) = 1/phi - 1, psi'(t) = s3 / phi^3.
    const double psi = 1.0 / phi - 1.0;
    const double dpsi = s3 / (phi * phi * phi);
    double next = t - psi / dpsi;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= std::numeric_limits<double>::epsilon() * hi) break;
    t = next;
  }
  Eigen::VectorXd coef(n);
  for (Eigen::Index i = 0; i < n; ++i) coef[i] = c[i] / (g[i] + t);
  Eigen::VectorXd h = v * coef;
  return h / h.norm();
}

double filter_penalty(const Signal& h, const AlpaConfig& cfg) {
  if (const auto* r = std::get_if<RidgeNormalization>(&cfg.normalization))
    return r->beta * (h.squared_norm() - 1.0);
  return 0.0;
}

bool costs_finite(const CostPair& c) {
  return std::isfinite(c.f_exact) && std::isfinite(c.f_eps) && std::isfinite(c.data_term);
}

}  // namespace

void AlpaConfig::validate() const {
  if (inner_iters < 1) throw InvalidArgument("inner_iters must be at least 1");
  if (max_outer < 1) throw InvalidArgument("max_outer must be at least 1");
  if (!(inner_tol > 0.0)) throw InvalidArgument("inner_tol must be > 0");
  if (!(outer_tol > 0.0)) throw InvalidArgument("outer_tol must be > 0");
  if (filter_len < 1) throw InvalidArgument("filter_len must be at least 1");
  if (const auto* r = std::get_if<RidgeNormalization>(&normalization))
    if (!(r->beta > 0.0) || !std::isfinite(r->beta)) throw InvalidArgument("ridge beta must be > 0");
  if (solve_path == SolvePath::mil && !(penalty.delta() > 0.0))
    throw InvalidArgument("the MIL path needs delta > 0");
  if (const auto* lp = std::get_if<LinearPredictionInit>(&h_init))
    if (lp->order < 1) throw InvalidArgument("linear prediction order must be at least 1");
  if (const auto* u = std::get_if<UserInit>(&h_init)) {
    if (u->h.size() != filter_len)
      throw DimensionMismatch("user filter length differs from filter_len");
    if (u->h.is_zero()) throw InvalidArgument("user filter is identically zero");
  }
}

std::string to_string(SolvePath path) {
  switch (path) {
    case SolvePath::direct: return "direct";
    case SolvePath::mil: return "mil";
    case SolvePath::automatic: return "auto";
  }
  return "?";
}

std::string describe(const Normalization& n) {
  return std::visit(overloaded{
                        [](const UnitNormProjection&) { return std::string("unit_norm_projection"); },
                        [](const RescaleToUnitNorm&) { return std::string("rescale"); },
                        [](const RidgeNormalization& r) {
                          std::ostringstream os;
                          os.precision(17);
                          os << "ridge(" << r.beta << ")";
                          return os.str();
                        },
                    },
                    n);
}

std::string describe(const FilterInit& init) {
  return std::visit(overloaded{
                        [](const UnitImpulseInit&) { return std::string("unit_impulse"); },
                        [](const SmoothedRandomInit& s) {
                          return "smoothed_random(" + std::to_string(s.seed) + ")";
                        },
                        [](const UserInit&) { return std::string("user"); },
                        [](const LinearPredictionInit& lp) {
                          return "linear_prediction(" + std::to_string(lp.order) + ")";
                        },
                    },
                    init);
}

Eigen::VectorXd majorizer_curvature(const Eigen::Ref<const Eigen::VectorXd>& e,
                                    const PenaltyParams& params) {
  return 0.5 * params.delta() * irls_weights(e, params);
}

Eigen::VectorXd majorizer_inverse_curvature(const Eigen::Ref<const Eigen::VectorXd>& e,
                                            const PenaltyParams& params) {
  if (!(params.delta() > 0.0)) throw InvalidArgument("inverse curvature needs delta > 0");
  const double lead = 2.0 / (params.delta() * params.p());
  const double expo = 1.0 - params.p() / 2.0;
  Eigen::VectorXd d(e.size());
  for (Eigen::Index i = 0; i < e.size(); ++i)
    d[i] = lead * std::pow(e[i] * e[i] + params.epsilon(), expo);
  return d;
}

Eigen::VectorXd solve_reweighted_direct(const ConvOperator& h_op, const Signal& y,
                                        const Eigen::Ref<const Eigen::VectorXd>& curvature) {
  if (static_cast<std::size_t>(curvature.size()) != h_op.input_len())
    throw DimensionMismatch("curvature length must equal the excitation length");
  Eigen::MatrixXd a = h_op.gram();
  a.diagonal() += curvature;
  return spd_solve(a, h_op.adjoint(y.vec()), "direct e-step");
}

Eigen::VectorXd solve_reweighted_mil(const ConvOperator& h_op, const Signal& y,
                                     const Eigen::Ref<const Eigen::VectorXd>& inv_curvature) {
  const std::size_t m = h_op.input_len();
  const std::size_t l = h_op.kernel().size();
  const std::size_t n = h_op.output_len();
  if (static_cast<std::size_t>(inv_curvature.size()) != m)
    throw DimensionMismatch("inverse curvature length must equal the excitation length");
  if (y.size() != n) throw DimensionMismatch("observation length mismatch");

  // B = I + H D^-1 H^T. Column s of H is h placed at rows s..s+L-1, so
  // d_s h h^T lands on the L x L block at (s, s); B is banded with width L.
  Eigen::MatrixXd b = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n),
                                                static_cast<Eigen::Index>(n));
  const auto& kt = kernels::active();
  const double* hk = h_op.kernel().data();
  for (std::size_t s = 0; s < m; ++s) {
    const double ds = inv_curvature[static_cast<Eigen::Index>(s)];
    for (std::size_t i = 0; i < l; ++i) {
      const double a = ds * hk[i];
      if (a == 0.0) continue;
      kt.axpy(a, hk, b.col(static_cast<Eigen::Index>(s + i)).data() + s, l);
    }
  }
  const Eigen::VectorXd z = spd_solve(b, y.vec(), "MIL e-step");
  return inv_curvature.cwiseProduct(h_op.adjoint(z));
}

EStepResult e_step_direct(const Signal& y, const Signal& h, const Signal& e_prev,
                          const AlpaConfig& cfg) {
  return run_irls(y, h, e_prev, cfg, SolvePath::direct);
}

EStepResult e_step_mil(const Signal& y, const Signal& h, const Signal& e_prev,
                       const AlpaConfig& cfg) {
  return run_irls(y, h, e_prev, cfg, SolvePath::mil);
}

EStepResult e_step(const Signal& y, const Signal& h, const Signal& e_prev, const AlpaConfig& cfg) {
  return run_irls(y, h, e_prev, cfg, cfg.solve_path);
}

Eigen::VectorXd sphere_constrained_ls(const Eigen::Ref<const Eigen::MatrixXd>& gram,
                                      const Eigen::Ref<const Eigen::VectorXd>& rhs) {
  if (gram.rows() != gram.cols() || gram.rows() != rhs.size())
    throw DimensionMismatch("sphere-constrained LS: inconsistent sizes");
  return sphere_solve(gram, rhs);
}

HStepResult h_step(const Signal& y, const Signal& e, const AlpaConfig& cfg) {
  const std::size_t l = cfg.filter_len;
  if (y.size() != l + e.size() - 1)
    throw DimensionMismatch("len(y) must equal filter_len + len(e) - 1");
  if (e.is_zero())
    throw DegenerateExcitation(
        "excitation is identically zero; the filter is undetermined (reduce delta)");

  const ConvOperator e_op(e, l);
  Eigen::VectorXd h;
  double e_scale = 1.0;
  std::visit(overloaded{
                 [&](const UnitNormProjection&) {
                   h = sphere_solve(e_op.gram(), e_op.adjoint(y.vec()));
                 },
                 [&](const RescaleToUnitNorm&) {
                   h = e_op.materialize().colPivHouseholderQr().solve(y.vec());
                   const double nrm = h.norm();
                   if (!(nrm > 0.0) || !std::isfinite(nrm))
                     throw DegenerateExcitation("least-squares filter vanished; cannot rescale");
                   h /= nrm;
                   e_scale = nrm;
                 },
                 [&](const RidgeNormalization& r) {
                   Eigen::MatrixXd a = e_op.gram();
                   a.diagonal().array() += r.beta;
                   h = spd_solve(a, e_op.adjoint(y.vec()), "ridge h-step");
                 },
             },
             cfg.normalization);

  Eigen::Index peak = 0;
  h.cwiseAbs().maxCoeff(&peak);
  if (h[peak] < 0.0) {
    h = -h;
    e_scale = -e_scale;
  }
  if (!h.allFinite()) throw NumericalFailure("h-step produced non-finite values");
  return {Signal(h), e_scale};
}

Signal linear_prediction_filter(const Signal& y, std::size_t order, std::size_t length) {
  if (order < 1 || order >= y.size())
    throw InvalidArgument("linear prediction order must lie in [1, len(y))");
  if (length < 1) throw InvalidArgument("filter length must be at least 1");

  std::vector<double> r(order + 1);
  for (std::size_t lag = 0; lag <= order; ++lag)
    r[lag] = kernels::dot(y.span().subspan(0, y.size() - lag), y.span().subspan(lag));
  if (!(r[0] > 0.0)) throw InvalidArgument("observation is identically zero");

  // Levinson-Durbin: predictor y[n] ~ sum_j a[j] y[n-j].
  std::vector<double> a(order + 1, 0.0), prev(order + 1, 0.0);
  double err = r[0];
  for (std::size_t i = 1; i <= order; ++i) {
    double acc = r[i];
    for (std::size_t j = 1; j < i; ++j) acc -= a[j] * r[i - j];
    const double k = acc / err;
    prev = a;
    a[i] = k;
    for (std::size_t j = 1; j < i; ++j) a[j] = prev[j] - k * prev[i - j];
    err *= (1.0 - k * k);
    if (!(err > 0.0)) break;  // perfectly predictable; keep the model so far
  }

  // Impulse response of 1 / (1 - sum_j a[j] z^-j).
  std::vector<double> x(length, 0.0);
  for (std::size_t n = 0; n < length; ++n) {
    double v = n == 0 ? 1.0 : 0.0;
    for (std::size_t j = 1; j <= std::min(order, n); ++j) v += a[j] * x[n - j];
    x[n] = v;
  }
  Signal out(std::move(x));
  return out.scaled(1.0 / out.norm2());
}

Signal initial_filter(const Signal& y, const AlpaConfig& cfg) {
  const std::size_t l = cfg.filter_len;
  return std::visit(
      overloaded{
          [&](const UnitImpulseInit&) { return Signal::impulse(l); },
          [&](const SmoothedRandomInit& s) {
            std::mt19937_64 rng(s.seed);
            std::normal_distribution<double> normal;
            constexpr std::size_t kWindow = 5;
            std::vector<double> white(l + kWindow - 1);
            for (double& v : white) v = normal(rng);
            std::vector<double> h(l, 0.0);
            for (std::size_t n = 0; n < l; ++n) {
              for (std::size_t j = 0; j < kWindow; ++j) h[n] += white[n + j];
              h[n] /= static_cast<double>(kWindow);
            }
            Signal out(std::move(h));
            if (out.is_zero()) return Signal::impulse(l);
            return out.scaled(1.0 / out.norm2());
          },
          [&](const UserInit& u) { return u.h.scaled(1.0 / u.h.norm2()); },
          [&](const LinearPredictionInit& lp) {
            return linear_prediction_filter(y, std::min(lp.order, y.size() - 1), l);
          },
      },
      cfg.h_init);
}

DeconvolutionResult run_alpa(const Signal& y, const AlpaConfig& cfg) {
  cfg.validate();
  const std::size_t l = cfg.filter_len;
  if (y.size() <= l) throw InvalidArgument("len(y) must exceed filter_len");
  const std::size_t m = y.size() - l + 1;
  const PenaltyParams& pp = cfg.penalty;

  DeconvolutionResult res{Signal::zeros(1), Signal::zeros(1), {}, Termination::max_iters};
  auto& records = res.trace.records;

  Signal h = initial_filter(y, cfg);
  // The first solve uses identity weights: regularized least squares.
  Signal e(solve_reweighted_direct(ConvOperator(h, m), y,
                                   Eigen::VectorXd::Constant(static_cast<Eigen::Index>(m), pp.delta())));
  {
    IterationRecord rec{0, h, e, cost_pair(y, h, e, pp), filter_penalty(h, cfg),
                        {stationarity_residual(y, h, e, pp)},
                        std::numeric_limits<double>::quiet_NaN()};
    if (!costs_finite(rec.costs))
      throw AlpaFailure("initial cost is not finite", res.trace, false);
    records.push_back(std::move(rec));
  }

  const double degenerate_floor = 1e-12 * y.norm2();
  for (std::size_t k = 1; k <= cfg.max_outer; ++k) {
    EStepResult es = e_step(y, h, e, cfg);
    if (es.e.norm2() <= degenerate_floor)
      throw AlpaFailure("excitation collapsed to zero at sweep " + std::to_string(k) +
                            "; reduce delta",
                        res.trace, true);
    HStepResult hs = h_step(y, es.e, cfg);
    Signal e_next = hs.e_scale == 1.0 ? std::move(es.e) : es.e.scaled(hs.e_scale);

    const double denom = e.squared_norm();
    Eigen::VectorXd diff = e_next.vec() - e.vec();
    const double rel = denom > 0.0 ? diff.squaredNorm() / denom
                                   : std::numeric_limits<double>::infinity();

    IterationRecord rec{k, hs.h, e_next, cost_pair(y, hs.h, e_next, pp),
                        filter_penalty(hs.h, cfg), std::move(es.residuals), rel};
    const bool finite = costs_finite(rec.costs);
    records.push_back(std::move(rec));
    if (!finite)
      throw AlpaFailure("cost became non-finite at sweep " + std::to_string(k), res.trace, false);

    h = std::move(hs.h);
    e = std::move(e_next);
    if (rel <= cfg.outer_tol) {
      res.termination = Termination::tolerance_met;
      break;
    }
  }
  res.h_opt = h;
  res.e_opt = e;
  return res;
}

TraceCheck check_trace(const IterationTrace& trace, const PenaltyParams& params, double slack) {
  TraceCheck out;
  if (trace.records.empty()) return out;
  const double m = static_cast<double>(trace.records.front().e.size());
  const double gap_bound = params.delta() * m * std::pow(params.epsilon(), params.p() / 2.0);
  for (std::size_t k = 0; k < trace.records.size(); ++k) {
    const auto& cur = trace.records[k];
    const double gap = cur.costs.f_eps - cur.costs.f_exact;
    if (params.delta() > 0.0 && !(gap > 0.0 && gap <= gap_bound)) ++out.sandwich_violations;
    if (k == 0) continue;
    const auto& prev = trace.records[k - 1];
    const double before = prev.costs.f_eps + prev.filter_penalty;
    const double after = cur.costs.f_eps + cur.filter_penalty;
    const double excess = after - before;
    if (excess > slack * (1.0 + std::abs(before))) {
      ++out.descent_violations;
      out.worst_descent_excess = std::max(out.worst_descent_excess, excess);
    }
    const double exact_before = prev.costs.f_exact + prev.filter_penalty;
    const double exact_after = cur.costs.f_exact + cur.filter_penalty;
    if (exact_after - exact_before > gap_bound + slack * (1.0 + std::abs(exact_before)))
      ++out.rise_violations;
  }
  return out;
}

}  // namespace sbd
