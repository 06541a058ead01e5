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

#include "sbd/init_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Cholesky>

#include "sbd/convolution.hpp"
#include "sbd/errors.hpp"

namespace sbd {

namespace {

Eigen::LLT<Eigen::MatrixXd> factor_reg_ls(const ConvOperator& op, double delta) {
  Eigen::MatrixXd a = op.gram();
  a.diagonal().array() += delta;
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success)
    throw NumericalFailure("regularized least-squares system is singular");
  return llt;
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

// sqrt(M) (1 - 2C) xi - (delta + C) ||e*||, divided by (kappa_q + C).
double deviation_scale(const BoundGeometry& g, std::size_t m, double delta, double xi) {
  const double num = std::sqrt(static_cast<double>(m)) * (1.0 - 2.0 * g.c_delta_h) * xi -
                     (delta + g.c_delta_h) * g.e_star_norm;
  return num / (g.kappa_q + g.c_delta_h);
}

void require_applicable(const BoundGeometry& g) {
  if (!g.applicable)
    throw BoundInapplicable("filter error too large: C = sqrt(M) kappa_q ||dh|| = " +
                            std::to_string(g.c_delta_h) + " must be < 1/2");
}

}  // namespace

double noise_sigma(const NoiseModel& model) {
  if (const auto* g = std::get_if<GaussianNoise>(&model)) return g->sigma;
  return std::get<BoundedNoise>(model).sigma;
}

void BoundInputs::validate() const {
  if (h_star.size() != h_tilde.size()) throw DimensionMismatch("h_star and h_tilde differ in length");
  if (std::abs(h_star.norm2() - 1.0) > 1e-12) throw InvalidArgument("h_star must have unit norm");
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw InvalidArgument("delta must be >= 0");
  if (const auto* g = std::get_if<GaussianNoise>(&noise)) {
    if (!(g->sigma >= 0.0) || !std::isfinite(g->sigma)) throw InvalidArgument("sigma must be >= 0");
  } else {
    const auto& b = std::get<BoundedNoise>(noise);
    if (!(b.sigma > 0.0 && b.sigma <= b.a) || !std::isfinite(b.a))
      throw InvalidArgument("bounded noise needs 0 < sigma <= a");
  }
}

Signal reg_ls_init(const Signal& y, const Signal& h_tilde, double delta) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw InvalidArgument("delta must be >= 0");
  if (y.size() < h_tilde.size()) throw DimensionMismatch("observation shorter than the filter");
  const ConvOperator op(h_tilde, y.size() - h_tilde.size() + 1);
  const Eigen::VectorXd e = factor_reg_ls(op, delta).solve(op.adjoint(y.vec()));
  if (!e.allFinite()) throw NumericalFailure("regularized least-squares solve is not finite");
  return Signal(e);
}

Signal perturbed_filter(const Signal& h_star, std::size_t m, double delta, double fraction,
                        std::uint64_t seed) {
  if (!(fraction >= 0.0) || !std::isfinite(fraction)) throw InvalidArgument("fraction must be >= 0");
  const double kappa = quasi_condition(h_star, m, delta);
  const double radius = fraction / (2.0 * std::sqrt(static_cast<double>(m)) * kappa);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Eigen::VectorXd dir(static_cast<Eigen::Index>(h_star.size()));
  for (Eigen::Index i = 0; i < dir.size(); ++i) dir[i] = nd(rng);
  if (!(dir.norm() > 0.0)) dir.setOnes();
  return Signal(Eigen::VectorXd(h_star.vec() + radius * dir.normalized()));
}

double quasi_condition(const Signal& h, std::size_t input_len, double delta) {
  const SingularRange s = singular_range(ConvOperator(h, input_len));
  return s.sigma_max / (s.sigma_min * s.sigma_min + delta);
}

BoundGeometry bound_geometry(const BoundInputs& inp) {
  inp.validate();
  BoundGeometry g;
  const SingularRange s = singular_range(ConvOperator(inp.h_star, inp.m()));
  g.sigma_min = s.sigma_min;
  g.sigma_max = s.sigma_max;
  g.kappa_q = s.sigma_max / (s.sigma_min * s.sigma_min + inp.delta);
  g.delta_h_norm = (inp.h_star.vec() - inp.h_tilde.vec()).norm();
  g.c_delta_h = std::sqrt(static_cast<double>(inp.m())) * g.kappa_q * g.delta_h_norm;
  g.e_star_norm = inp.e_star.norm2();
  g.applicable = g.c_delta_h < 0.5;
  return g;
}

double mae_bound_value(const BoundGeometry& g, std::size_t m, double delta, double w_norm) {
  require_applicable(g);
  return ((g.kappa_q + g.c_delta_h) * w_norm + (delta + g.c_delta_h) * g.e_star_norm) /
         (std::sqrt(static_cast<double>(m)) * (1.0 - 2.0 * g.c_delta_h));
}

MaeCheck mae_upper_bound(const BoundInputs& inp, const Signal& w) {
  const BoundGeometry g = bound_geometry(inp);
  if (w.size() != inp.n()) throw DimensionMismatch("noise length must be len(h) + len(e) - 1");
  const Signal y(Eigen::VectorXd(convolve(inp.h_star, inp.e_star).vec() + w.vec()));
  const Signal e_hat = reg_ls_init(y, inp.h_tilde, inp.delta);
  MaeCheck out;
  out.bound = mae_bound_value(g, inp.m(), inp.delta, w.norm2());
  out.actual = (inp.e_star.vec() - e_hat.vec()).lpNorm<1>() / static_cast<double>(inp.m());
  return out;
}

TailBound markov_tail_bound(const BoundGeometry& g, std::size_t m, std::size_t n, double delta,
                            double sigma, double xi, BoundForm form) {
  require_applicable(g);
  const double t = deviation_scale(g, m, delta, xi);
  if (!(t > 0.0)) return {1.0, true};
  const double second_moment =
      form == BoundForm::printed ? sigma * sigma : static_cast<double>(n) * sigma * sigma;
  const double raw = second_moment / (t * t);
  return {clamp01(raw), raw >= 1.0};
}

TailBound hoeffding_tail_bound(const BoundGeometry& g, std::size_t m, std::size_t n, double delta,
                               double a, double sigma, double xi, BoundForm form) {
  require_applicable(g);
  const double t = deviation_scale(g, m, delta, xi);
  if (!(t > 0.0)) return {1.0, true};
  const double t2 = t * t;
  double raw = 1.0;
  if (form == BoundForm::printed) {
    // Hoeffding only speaks about upward deviations; below sigma^2 it is vacuous.
    if (t2 <= sigma * sigma) return {1.0, true};
    const double dev = t2 - sigma * sigma;
    raw = std::exp(-static_cast<double>(m) / (2.0 * a * a) * dev * dev);
  } else {
    const double nn = static_cast<double>(n);
    if (t2 <= nn * sigma * sigma) return {1.0, true};
    const double dev = t2 - nn * sigma * sigma;
    raw = std::exp(-2.0 * dev * dev / (nn * a * a * a * a));
  }
  return {clamp01(raw), raw >= 1.0};
}

TailBound markov_tail_bound(const BoundInputs& inp, double xi, BoundForm form) {
  const BoundGeometry g = bound_geometry(inp);
  return markov_tail_bound(g, inp.m(), inp.n(), inp.delta, noise_sigma(inp.noise), xi, form);
}

TailBound hoeffding_tail_bound(const BoundInputs& inp, double xi, BoundForm form) {
  const auto* b = std::get_if<BoundedNoise>(&inp.noise);
  if (b == nullptr) throw ModelMismatch("the Hoeffding bound needs bounded noise");
  const BoundGeometry g = bound_geometry(inp);
  return hoeffding_tail_bound(g, inp.m(), inp.n(), inp.delta, b->a, b->sigma, xi, form);
}

double ls_hoeffding_bound(std::size_t m, double a, double sigma, double kappa_q, double xi) {
  const double md = static_cast<double>(m);
  const double dev = xi * xi / (kappa_q * kappa_q) - sigma * sigma / md;
  if (dev <= 0.0) return 1.0;
  return clamp01(std::exp(-md * md * md / (2.0 * a * a) * dev * dev));
}

double ls_hoeffding_bound_n_sigma(std::size_t m, double a, double sigma, double kappa_q, double n) {
  const double md = static_cast<double>(m);
  const double dev = n * n / (kappa_q * kappa_q) - 1.0 / md;
  if (dev <= 0.0) return 1.0;
  return clamp01(std::exp(-md * md * md * std::pow(sigma, 4) / (2.0 * a * a) * dev * dev));
}

double ls_hoeffding_bound_worst_case(std::size_t m, double a, double kappa_q, double n) {
  const double md = static_cast<double>(m);
  const double dev = n * n / (kappa_q * kappa_q) - 1.0 / md;
  if (dev <= 0.0) return 1.0;
  return clamp01(std::exp(-md * md * md * a * a / 2.0 * dev * dev));
}

double nontrivial_threshold(const BoundInputs& inp, BoundForm form) {
  const BoundGeometry g = bound_geometry(inp);
  require_applicable(g);
  double sigma = noise_sigma(inp.noise);
  if (form == BoundForm::derived) sigma *= std::sqrt(static_cast<double>(inp.n()));
  return (sigma * (g.kappa_q + g.c_delta_h) + (inp.delta + g.c_delta_h) * g.e_star_norm) /
         (std::sqrt(static_cast<double>(inp.m())) * (1.0 - 2.0 * g.c_delta_h));
}

double printed_delta_h_condition(const BoundInputs& inp, double xi) {
  const BoundGeometry g = bound_geometry(inp);
  const double sigma = noise_sigma(inp.noise);
  return (xi / (sigma * g.kappa_q) - 1.0) /
         ((sigma + 2.0) * std::sqrt(static_cast<double>(inp.m())) + g.e_star_norm);
}

BoundReport bound_report(const BoundInputs& inp, const std::vector<double>& xi_grid,
                         BoundForm form) {
  const BoundGeometry g = bound_geometry(inp);
  require_applicable(g);
  const double sigma = noise_sigma(inp.noise);
  BoundReport rep;
  rep.kappa_q = g.kappa_q;
  rep.c_delta_h = g.c_delta_h;
  rep.mae_upper_bound =
      mae_bound_value(g, inp.m(), inp.delta, sigma * std::sqrt(static_cast<double>(inp.n())));
  rep.nontrivial_threshold = nontrivial_threshold(inp, form);
  const auto* b = std::get_if<BoundedNoise>(&inp.noise);
  for (double xi : xi_grid) {
    TailRow row;
    row.xi = xi;
    row.markov = markov_tail_bound(g, inp.m(), inp.n(), inp.delta, sigma, xi, form).probability;
    row.hoeffding = b ? hoeffding_tail_bound(g, inp.m(), inp.n(), inp.delta, b->a, b->sigma, xi, form)
                            .probability
                      : std::numeric_limits<double>::quiet_NaN();
    rep.tails.push_back(row);
  }
  return rep;
}

McTable monte_carlo_validate(const BoundInputs& inp, const std::vector<double>& xi_grid,
                             std::size_t trials, std::uint64_t seed, BoundForm form) {
  if (trials < 1) throw InvalidArgument("trials must be at least 1");
  const BoundGeometry g = bound_geometry(inp);
  require_applicable(g);
  const std::size_t m = inp.m();
  const std::size_t n = inp.n();
  const ConvOperator h_tilde_op(inp.h_tilde, m);
  const auto llt = factor_reg_ls(h_tilde_op, inp.delta);
  const Eigen::VectorXd clean = ConvOperator(inp.h_star, m).apply(inp.e_star.vec());
  const auto* bounded = std::get_if<BoundedNoise>(&inp.noise);
  const double sigma = noise_sigma(inp.noise);

  std::vector<std::size_t> exceed(xi_grid.size(), 0);
  McTable table;
  table.trials = trials;
  table.min_mae_slack = std::numeric_limits<double>::infinity();
  Eigen::VectorXd w(static_cast<Eigen::Index>(n));
  for (std::size_t t = 0; t < trials; ++t) {
    auto rng = trial_rng(seed, t);
    if (bounded) {
      std::uniform_real_distribution<double> u(-bounded->a, bounded->a);
      for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = u(rng);
    } else {
      std::normal_distribution<double> nd(0.0, sigma);
      for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = nd(rng);
    }
    const Eigen::VectorXd e_hat = llt.solve(h_tilde_op.adjoint(Eigen::VectorXd(clean + w)));
    const double mae = (inp.e_star.vec() - e_hat).lpNorm<1>() / static_cast<double>(m);
    const double bound = mae_bound_value(g, m, inp.delta, w.norm());
    if (mae > bound) ++table.mae_violations;
    table.min_mae_slack = std::min(table.min_mae_slack, bound - mae);
    table.max_mae = std::max(table.max_mae, mae);
    for (std::size_t k = 0; k < xi_grid.size(); ++k)
      if (mae > xi_grid[k]) ++exceed[k];
  }
  for (std::size_t k = 0; k < xi_grid.size(); ++k) {
    McRow row;
    row.xi = xi_grid[k];
    row.empirical = static_cast<double>(exceed[k]) / static_cast<double>(trials);
    row.markov = markov_tail_bound(g, m, n, inp.delta, sigma, xi_grid[k], form).probability;
    row.hoeffding =
        bounded ? hoeffding_tail_bound(g, m, n, inp.delta, bounded->a, bounded->sigma, xi_grid[k], form)
                      .probability
                : std::numeric_limits<double>::quiet_NaN();
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace sbd
