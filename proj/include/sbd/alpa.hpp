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

// Alternating l_p - l_2 projections for sparse blind deconvolution.
//
// The solver alternates two exact descent steps on the smoothed cost
//
//   F_eps(h, e) = ||y - h * e||^2 + delta * sum_i (e_i^2 + eps)^(p/2)
//
// e-step: iteratively reweighted least squares. Each inner solve minimizes
//   the quadratic majorizer of the penalty at the current iterate, i.e.
//   (H^T H + (delta/2) W) e = H^T y with W = diag(p (e_i^2 + eps)^(p/2-1)).
//   The system can be solved directly (M x M) or through the push-through
//   identity on the N x N matrix I + H D^-1 H^T, which stays well
//   conditioned when entries of e shrink and W grows without bound.
// h-step: least squares in the filter. In the default mode the filter is
//   restricted to the unit sphere and the constrained minimizer is computed
//   exactly, so both steps decrease F_eps and the scale ambiguity is fixed.

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "sbd/convolution.hpp"
#include "sbd/costs.hpp"
#include "sbd/errors.hpp"
#include "sbd/signal.hpp"

namespace sbd {

enum class SolvePath { direct, mil, automatic };

/// Exact least squares over ||h||_2 = 1.
struct UnitNormProjection {};
/// Unconstrained least squares, then divide h by its norm and multiply e by
/// the same factor so h * e is unchanged. Does not guarantee descent.
struct RescaleToUnitNorm {};
/// h = (E^T E + beta I)^-1 E^T y; descent holds for F_eps + beta (||h||^2 - 1).
struct RidgeNormalization {
  double beta = 1.0;
};
using Normalization = std::variant<UnitNormProjection, RescaleToUnitNorm, RidgeNormalization>;

struct UnitImpulseInit {};
/// Moving average (window 5) of seeded white noise, unit normalized.
struct SmoothedRandomInit {
  std::uint64_t seed = 0;
};
struct UserInit {
  Signal h;
};
/// Impulse response of the all-pole linear-prediction model of y.
struct LinearPredictionInit {
  std::size_t order = 20;
};
using FilterInit = std::variant<UnitImpulseInit, SmoothedRandomInit, UserInit, LinearPredictionInit>;

struct AlpaConfig {
  PenaltyParams penalty{0.1, 1.0, 1e-6};
  std::size_t inner_iters = 10;
  double inner_tol = 1e-8;
  std::size_t max_outer = 100;
  double outer_tol = 1e-6;
  Normalization normalization = UnitNormProjection{};
  SolvePath solve_path = SolvePath::automatic;
  FilterInit h_init = UnitImpulseInit{};
  std::size_t filter_len = 1;

  void validate() const;
};

std::string to_string(SolvePath path);
std::string describe(const Normalization& n);
std::string describe(const FilterInit& init);

struct IterationRecord {
  std::size_t k = 0;
  Signal h;
  Signal e;
  CostPair costs;
  /// beta (||h||^2 - 1) in ridge mode, 0 otherwise.
  double filter_penalty = 0.0;
  /// True stationarity residual after every inner solve of this e-step.
  std::vector<double> inner_residuals;
  /// ||e_k - e_{k-1}||^2 / ||e_{k-1}||^2; NaN for the initial record.
  double relative_change = 0.0;
};

/// Record 0 is the initialization (h_0, regularized least-squares e_0);
/// record k >= 1 holds the iterate after the k-th e-step/h-step sweep.
struct IterationTrace {
  std::vector<IterationRecord> records;
};

enum class Termination { tolerance_met, max_iters };

struct DeconvolutionResult {
  Signal h_opt;
  Signal e_opt;
  IterationTrace trace;
  Termination termination = Termination::max_iters;
};

/// Thrown when a cost turns non-finite or the excitation degenerates.
/// Carries the trace up to the failure.
class AlpaFailure : public NumericalFailure {
 public:
  AlpaFailure(const std::string& what, IterationTrace trace, bool degenerate)
      : NumericalFailure(what), trace_(std::move(trace)), degenerate_(degenerate) {}
  const IterationTrace& trace() const { return trace_; }
  bool degenerate_excitation() const { return degenerate_; }

 private:
  IterationTrace trace_;
  bool degenerate_;
};

struct EStepResult {
  Signal e;
  std::vector<double> residuals;
  std::size_t iterations = 0;
  std::size_t mil_solves = 0;
};

/// One reweighted solve (H^T H + diag(curvature)) e = H^T y via the M x M system.
Eigen::VectorXd solve_reweighted_direct(const ConvOperator& h_op, const Signal& y,
                                        const Eigen::Ref<const Eigen::VectorXd>& curvature);

/// The same solve through e = D^-1 H^T (I + H D^-1 H^T)^-1 y with
/// D = diag(curvature); takes D^-1 directly so huge weights never appear.
Eigen::VectorXd solve_reweighted_mil(const ConvOperator& h_op, const Signal& y,
                                     const Eigen::Ref<const Eigen::VectorXd>& inv_curvature);

/// (delta/2) W(e): curvature of the penalty majorizer at e.
Eigen::VectorXd majorizer_curvature(const Eigen::Ref<const Eigen::VectorXd>& e,
                                    const PenaltyParams& params);
/// Its reciprocal, computed as (2 / (delta p)) (e^2 + eps)^(1 - p/2).
Eigen::VectorXd majorizer_inverse_curvature(const Eigen::Ref<const Eigen::VectorXd>& e,
                                            const PenaltyParams& params);

EStepResult e_step_direct(const Signal& y, const Signal& h, const Signal& e_prev,
                          const AlpaConfig& cfg);
EStepResult e_step_mil(const Signal& y, const Signal& h, const Signal& e_prev,
                       const AlpaConfig& cfg);
/// Dispatches on cfg.solve_path; automatic picks MIL per solve when
/// min e_i^2 < eps and delta > 0.
EStepResult e_step(const Signal& y, const Signal& h, const Signal& e_prev, const AlpaConfig& cfg);

struct HStepResult {
  Signal h;
  /// Multiply e by this to keep h * e unchanged (sign fix and, in rescale
  /// mode, the removed norm).
  double e_scale = 1.0;
};

/// Filter update for fixed e. The largest-magnitude entry of the returned
/// filter is positive.
HStepResult h_step(const Signal& y, const Signal& e, const AlpaConfig& cfg);

/// Minimizes h^T A h - 2 b^T h over ||h||_2 = 1 (A symmetric PSD), including
/// the degenerate case where b is orthogonal to the bottom eigenspace of A.
Eigen::VectorXd sphere_constrained_ls(const Eigen::Ref<const Eigen::MatrixXd>& gram,
                                      const Eigen::Ref<const Eigen::VectorXd>& rhs);

/// Autocorrelation-method linear prediction of the given order, returned as
/// the first `length` samples of the all-pole impulse response, unit norm.
Signal linear_prediction_filter(const Signal& y, std::size_t order, std::size_t length);

/// h_0 for the configured initialization, normalized to unit norm.
Signal initial_filter(const Signal& y, const AlpaConfig& cfg);

DeconvolutionResult run_alpa(const Signal& y, const AlpaConfig& cfg);

/// Checks of the descent properties over a trace.
struct TraceCheck {
  std::size_t descent_violations = 0;  // F_eps (+ filter penalty) increased
  std::size_t sandwich_violations = 0;  // gap outside (0, delta M eps^(p/2)]
  std::size_t rise_violations = 0;      // F (+ filter penalty) rose by more than delta M eps^(p/2)
  double worst_descent_excess = 0.0;
  bool ok() const {
    return descent_violations == 0 && sandwich_violations == 0 && rise_violations == 0;
  }
};

TraceCheck check_trace(const IterationTrace& trace, const PenaltyParams& params,
                       double slack = 1e-10);

}  // namespace sbd
