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

// Error bounds for the regularized least-squares excitation estimate
//   e_hat = (H~^T H~ + delta I)^-1 H~^T y
// built from an imperfect filter h~ = h* - dh. With
//   kappa_q = sigma_max(H*) / (sigma_min(H*)^2 + delta),
//   C       = sqrt(M) kappa_q ||dh||,
// the mean absolute error obeys (to first order in ||dh||)
//   MAE <= ((kappa_q + C) ||w|| + (delta + C) ||e*||) / (sqrt(M) (1 - 2C)),
// which turns into tail bounds on P(MAE > xi) through Markov's inequality
// on ||w||^2 and, for bounded noise, Hoeffding's inequality on the w_i^2.

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "sbd/signal.hpp"

namespace sbd {

struct GaussianNoise {
  double sigma = 0.0;
};
/// i.i.d. noise supported on [-a, a] with E w_i^2 = sigma^2 (sigma <= a).
/// Monte-Carlo draws are uniform, so callers normally pass sigma = a / sqrt(3).
struct BoundedNoise {
  double a = 0.0;
  double sigma = 0.0;
};
using NoiseModel = std::variant<GaussianNoise, BoundedNoise>;

double noise_sigma(const NoiseModel& model);

/// `printed` evaluates the tail bounds exactly as commonly stated, with
/// E||w||^2 entering as sigma^2 and the Hoeffding exponent M/(2a^2) (T^2 - sigma^2)^2.
/// `derived` redoes both steps for a noise vector of length N = L + M - 1:
/// Markov with E||w||^2 = N sigma^2, and Hoeffding on (1/N) sum w_i^2 with
/// w_i^2 in [0, a^2], giving exp(-2 (T^2 - N sigma^2)^2 / (N a^4)).
/// `derived` is the default: the printed Markov form undercounts E||w||^2 by a
/// factor N and is exceeded by Monte-Carlo tails just above its threshold.
enum class BoundForm { printed, derived };

struct BoundInputs {
  Signal h_star;
  Signal h_tilde;
  Signal e_star;
  double delta = 0.0;
  NoiseModel noise = GaussianNoise{};

  std::size_t m() const { return e_star.size(); }
  std::size_t n() const { return h_star.size() + e_star.size() - 1; }
  /// Throws InvalidArgument / DimensionMismatch on inconsistent inputs.
  void validate() const;
};

/// h_star plus a perturbation of norm fraction / (2 sqrt(M) kappa_q(H*)) in a
/// seeded random direction, so that C = fraction / 2. fraction < 1 keeps the
/// bounds applicable.
Signal perturbed_filter(const Signal& h_star, std::size_t m, double delta, double fraction,
                        std::uint64_t seed);

/// (H~^T H~ + delta I)^-1 H~^T y with M = len(y) - len(h_tilde) + 1.
Signal reg_ls_init(const Signal& y, const Signal& h_tilde, double delta);

/// sigma_max(H) / (sigma_min(H)^2 + delta) from the exact singular values.
double quasi_condition(const Signal& h, std::size_t input_len, double delta);

struct BoundGeometry {
  double kappa_q = 0.0;
  double c_delta_h = 0.0;
  double delta_h_norm = 0.0;
  double e_star_norm = 0.0;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  bool applicable = false;  // c_delta_h < 1/2
};

BoundGeometry bound_geometry(const BoundInputs& inp);

/// Right-hand side of the MAE bound for a given ||w||_2.
/// Throws BoundInapplicable when C >= 1/2.
double mae_bound_value(const BoundGeometry& g, std::size_t m, double delta, double w_norm);

struct MaeCheck {
  double bound = 0.0;
  double actual = 0.0;  // (1/M) ||e* - e_hat||_1
  bool dominated() const { return actual <= bound; }
};

/// Evaluates the bound for the concrete noise draw w (length N) and the
/// actual error of reg_ls_init on y = h* * e* + w.
MaeCheck mae_upper_bound(const BoundInputs& inp, const Signal& w);

struct TailBound {
  double probability = 1.0;  // clamped to [0, 1]
  bool vacuous = false;      // the raw expression was >= 1 or undefined
};

TailBound markov_tail_bound(const BoundInputs& inp, double xi, BoundForm form = BoundForm::derived);
/// Throws ModelMismatch unless the noise model is BoundedNoise.
TailBound hoeffding_tail_bound(const BoundInputs& inp, double xi,
                               BoundForm form = BoundForm::derived);

/// Same two bounds from precomputed geometry.
TailBound markov_tail_bound(const BoundGeometry& g, std::size_t m, std::size_t n, double delta,
                            double sigma, double xi, BoundForm form);
TailBound hoeffding_tail_bound(const BoundGeometry& g, std::size_t m, std::size_t n, double delta,
                               double a, double sigma, double xi, BoundForm form);

/// Non-blind, unregularized special cases (C = 0, delta = 0) of the printed
/// Hoeffding bound, each clamped to [0, 1].
double ls_hoeffding_bound(std::size_t m, double a, double sigma, double kappa_q, double xi);
/// xi = n sigma.
double ls_hoeffding_bound_n_sigma(std::size_t m, double a, double sigma, double kappa_q, double n);
/// Worst case sigma = a, xi = n a.
double ls_hoeffding_bound_worst_case(std::size_t m, double a, double kappa_q, double n);

/// Smallest xi at which the Markov bound drops below 1:
/// (s (kappa_q + C) + (delta + C) ||e*||) / (sqrt(M) (1 - 2C)) with s = sigma
/// for the printed form and s = sigma sqrt(N) for the derived one.
double nontrivial_threshold(const BoundInputs& inp, BoundForm form = BoundForm::derived);

/// The commonly printed sufficient condition on ||dh|| for a nontrivial
/// Markov bound, (xi / (sigma kappa_q) - 1) / ((sigma + 2) sqrt(M) + ||e*||).
/// Informational only: it mixes units and is neither necessary nor sufficient
/// in general. Use nontrivial_threshold() for decisions.
double printed_delta_h_condition(const BoundInputs& inp, double xi);

struct TailRow {
  double xi = 0.0;
  double markov = 1.0;
  double hoeffding = 1.0;  // NaN for Gaussian noise
};

struct BoundReport {
  double kappa_q = 0.0;
  double c_delta_h = 0.0;
  /// MAE bound at the root-mean-square noise norm sigma sqrt(N).
  double mae_upper_bound = 0.0;
  double nontrivial_threshold = 0.0;
  std::vector<TailRow> tails;
};

BoundReport bound_report(const BoundInputs& inp, const std::vector<double>& xi_grid,
                         BoundForm form = BoundForm::derived);

struct McRow {
  double xi = 0.0;
  double empirical = 0.0;
  double markov = 1.0;
  double hoeffding = 1.0;  // NaN for Gaussian noise
};

struct McTable {
  std::vector<McRow> rows;
  std::size_t trials = 0;
  std::size_t mae_violations = 0;  // draws where the MAE bound was exceeded
  double max_mae = 0.0;
  double min_mae_slack = 0.0;  // min over draws of bound - actual
};

/// Draws `trials` noise vectors (Gaussian, or uniform on [-a, a] for bounded
/// noise) and reports the empirical P(MAE > xi) next to the analytic bounds.
/// Trial t uses a generator seeded from (seed, t), so results do not depend
/// on evaluation order.
McTable monte_carlo_validate(const BoundInputs& inp, const std::vector<double>& xi_grid,
                             std::size_t trials, std::uint64_t seed,
                             BoundForm form = BoundForm::derived);

}  // namespace sbd
