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
#include <optional>
#include <vector>

#include "sbd/signal.hpp"

namespace sbd {

struct LassoConfig {
  double delta = 0.03;
  std::size_t max_iters = 200;
  double tol = 1e-9;         // relative change of e between iterations
  double epsilon_w = 1e-8;   // floor in the weights 1 / (|e_i| + epsilon_w)

  void validate() const;
};

struct LassoResult {
  Signal e;
  /// ||y - H e||^2 + delta ||e||_1 at the start point and after each iteration.
  std::vector<double> objective;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Non-blind l1-regularized deconvolution, min ||y - h * e||^2 + delta ||e||_1,
/// by reweighted least squares: (H^T H + (delta/2) diag(1/(|e_i| + eps_w))) e = H^T y.
/// Starts from the ridge solution (H^T H + (delta/2) I)^-1 H^T y unless `start` is given.
LassoResult lasso_irls(const Signal& y, const Signal& h, const LassoConfig& cfg,
                       const std::optional<Signal>& start = std::nullopt);

/// 3 sigma ||h||_2, the suggested lower bound for the LASSO weight.
double sdmm_delta_rule(const Signal& h, double sigma);

struct MatchedLasso {
  LassoResult result;
  double delta = 0.0;
  double residual = 0.0;  // ||y - h * e||^2
};

/// LASSO whose data residual ||y - h * e||^2 matches `target_residual`
/// (relative tolerance `rel_tol`), found by bisection on log(delta).
/// The residual is non-decreasing in delta, from the least-squares value at
/// delta -> 0 to ||y||^2 once delta >= 2 ||H^T y||_inf.
MatchedLasso lasso_matched_residual(const Signal& y, const Signal& h, double target_residual,
                                    const LassoConfig& base, double rel_tol = 1e-3,
                                    std::size_t max_bisections = 60);

}  // namespace sbd
