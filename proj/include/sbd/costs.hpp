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

#include <Eigen/Core>

#include "sbd/signal.hpp"

namespace sbd {

/// Penalty knobs shared by the costs and the solver.
///
/// `delta` is the regularization weight multiplying the sparsity penalty
/// (the same knob is sometimes called lambda). p = 0 is rejected: the
/// reweighting p (e^2 + eps)^(p/2 - 1) vanishes there and the e-step
/// degenerates to unregularized least squares.
class PenaltyParams {
 public:
  PenaltyParams(double p, double delta, double epsilon);

  double p() const { return p_; }
  double delta() const { return delta_; }
  double epsilon() const { return epsilon_; }

 private:
  double p_;
  double delta_;
  double epsilon_;
};

/// F = data_term + delta * penalty_exact, F_eps = data_term + delta * penalty_eps.
struct CostPair {
  double f_exact = 0.0;
  double f_eps = 0.0;
  double data_term = 0.0;
  double penalty_exact = 0.0;
  double penalty_eps = 0.0;
};

/// sum |e_i|^p, p in (0, 1].
double lp_norm_p(const Signal& e, double p);
double lp_norm_p(const Eigen::Ref<const Eigen::VectorXd>& e, double p);

/// sum (e_i^2 + eps)^(p/2).
double lp_eps(const Signal& e, const PenaltyParams& params);
double lp_eps(const Eigen::Ref<const Eigen::VectorXd>& e, const PenaltyParams& params);

/// Requires len(y) == len(h) + len(e) - 1.
CostPair cost_pair(const Signal& y, const Signal& h, const Signal& e, const PenaltyParams& params);
CostPair cost_pair(const Signal& y, const Signal& h, const Eigen::Ref<const Eigen::VectorXd>& e,
                   const PenaltyParams& params);

/// w_i = p (e_i^2 + eps)^(p/2 - 1). Strictly positive and finite for eps > 0.
Signal irls_weights(const Signal& e, const PenaltyParams& params);
Eigen::VectorXd irls_weights(const Eigen::Ref<const Eigen::VectorXd>& e,
                             const PenaltyParams& params);

/// Gradient of F_eps in e: 2 H^T (H e - y) + delta * w .* e.
///
/// The factor 2 on the data term is explicit. The e-step works with half of
/// this gradient, H^T (H e - y) + (delta / 2) W e, which is why its
/// reweighted system carries delta / 2.
Eigen::VectorXd cost_gradient(const Signal& y, const Signal& h,
                              const Eigen::Ref<const Eigen::VectorXd>& e,
                              const PenaltyParams& params);

/// || H^T (H e - y) + (delta / 2) W(e) e ||_2, i.e. half the gradient norm.
/// Zero exactly at stationary points of F_eps(h, .).
double stationarity_residual(const Signal& y, const Signal& h, const Signal& e,
                             const PenaltyParams& params);
double stationarity_residual(const Signal& y, const Signal& h,
                             const Eigen::Ref<const Eigen::VectorXd>& e,
                             const PenaltyParams& params);

/// Same residual with W frozen at `weights_at` instead of at `e`; this is
/// the normal-equation residual of a single reweighted solve.
double frozen_stationarity_residual(const Signal& y, const Signal& h,
                                    const Eigen::Ref<const Eigen::VectorXd>& e,
                                    const Eigen::Ref<const Eigen::VectorXd>& weights_at,
                                    const PenaltyParams& params);

}  // namespace sbd
