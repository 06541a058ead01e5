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
#include <vector>

#include "sbd/signal.hpp"

namespace sbd {

/// dB values are clamped to [-kDbClamp, kDbClamp].
inline constexpr double kDbClamp = 300.0;

/// (1/M) ||x - x_hat||_1.
double mae(const Signal& x, const Signal& x_hat);

/// Error after undoing the shift (and optionally scale) ambiguity.
///
/// The aligned estimate is a[n] = c * x_hat[(n + best_shift) mod M]; c is the
/// least-squares scale when align_scale is set (it may be negative) and 1
/// otherwise. The shift minimizing ||x_ref - a||^2 wins, smallest shift on ties.
///   mse_db = 10 log10(||x_ref - a||^2 / ||x_ref||^2)
///   mae_db = 20 log10(mean|x_ref - a| / mean|x_ref|)
struct AlignedError {
  std::size_t best_shift = 0;
  double best_scale = 1.0;
  double mse_db = 0.0;
  double mae_db = 0.0;
  double mse_ratio = 0.0;  // linear values behind the dB figures
  double mae_ratio = 0.0;
  std::size_t support_hits = 0;
  Signal aligned = Signal::zeros(1);
};

/// support_hits counts nonzero entries of x_ref matched (one-to-one, within
/// +-support_tolerance samples) by the largest-magnitude entries of the
/// aligned estimate, taking as many entries as x_ref has nonzeros.
AlignedError aligned_error(const Signal& x_ref, const Signal& x_hat, bool align_scale,
                           std::size_t support_tolerance = 0);

/// Indices of the k largest |x| entries, in decreasing magnitude order.
std::vector<std::size_t> top_k_indices(const Signal& x, std::size_t k);

/// Number of `truth` indices matched one-to-one by `found` within +-tolerance.
std::size_t support_matches(const std::vector<std::size_t>& truth,
                            const std::vector<std::size_t>& found, std::size_t tolerance);

/// 10 log10(||clean||^2 / ||observed - clean||^2), clamped.
double snr_db(const Signal& clean, const Signal& observed);

/// snr_db(clean, reconstructed) - snr_db(clean, noisy).
double snr_improvement_db(const Signal& y_noisy, const Signal& y_clean,
                          const Signal& y_reconstructed);

/// ||x||_1 / ||x||_2, i.e. the l1 norm after scaling to unit energy.
/// Ranges from 1 (one spike) to sqrt(M) (flat).
double l1_over_l2(const Signal& x);

}  // namespace sbd
