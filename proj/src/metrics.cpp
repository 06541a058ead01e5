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

#include "sbd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sbd/errors.hpp"

namespace sbd {

namespace {

void same_length(const Signal& a, const Signal& b) {
  if (a.size() != b.size())
    throw DimensionMismatch("signals differ in length: " + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()));
}

double to_db(double ratio, double factor) {
  if (ratio <= 0.0) return -kDbClamp;
  return std::clamp(factor * std::log10(ratio), -kDbClamp, kDbClamp);
}

}  // namespace

double mae(const Signal& x, const Signal& x_hat) {
  same_length(x, x_hat);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] - x_hat[i]);
  return s / static_cast<double>(x.size());
}

std::vector<std::size_t> top_k_indices(const Signal& x, std::size_t k) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  k = std::min(k, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                    [&](std::size_t a, std::size_t b) {
                      const double fa = std::abs(x[a]), fb = std::abs(x[b]);
                      return fa != fb ? fa > fb : a < b;
                    });
  idx.resize(k);
  return idx;
}

std::size_t support_matches(const std::vector<std::size_t>& truth,
                            const std::vector<std::size_t>& found, std::size_t tolerance) {
  std::vector<bool> used(found.size(), false);
  std::size_t hits = 0;
  for (std::size_t t : truth) {
    // Prefer the closest unused candidate.
    std::size_t best = found.size();
    std::size_t best_dist = std::numeric_limits<std::size_t>::max();
    for (std::size_t j = 0; j < found.size(); ++j) {
      if (used[j]) continue;
      const std::size_t d = found[j] > t ? found[j] - t : t - found[j];
      if (d <= tolerance && d < best_dist) {
        best = j;
        best_dist = d;
      }
    }
    if (best < found.size()) {
      used[best] = true;
      ++hits;
    }
  }
  return hits;
}

AlignedError aligned_error(const Signal& x_ref, const Signal& x_hat, bool align_scale,
                           std::size_t support_tolerance) {
  same_length(x_ref, x_hat);
  const std::size_t m = x_ref.size();
  const double ref_energy = x_ref.squared_norm();
  if (!(ref_energy > 0.0)) throw InvalidArgument("reference is identically zero; dB undefined");

  std::vector<double> rot(m);
  std::size_t best_shift = 0;
  double best_scale = 1.0;
  double best_err = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < m; ++s) {
    for (std::size_t n = 0; n < m; ++n) rot[n] = x_hat[(n + s) % m];
    double xr = 0.0, rr = 0.0;
    for (std::size_t n = 0; n < m; ++n) {
      xr += x_ref[n] * rot[n];
      rr += rot[n] * rot[n];
    }
    const double c = align_scale ? (rr > 0.0 ? xr / rr : 0.0) : 1.0;
    double err = 0.0;
    for (std::size_t n = 0; n < m; ++n) {
      const double d = x_ref[n] - c * rot[n];
      err += d * d;
    }
    if (err < best_err) {
      best_err = err;
      best_shift = s;
      best_scale = c;
    }
  }

  std::vector<double> aligned(m);
  for (std::size_t n = 0; n < m; ++n) aligned[n] = best_scale * x_hat[(n + best_shift) % m];

  AlignedError out;
  out.best_shift = best_shift;
  out.best_scale = best_scale;
  out.aligned = Signal(std::move(aligned));
  out.mse_ratio = best_err / ref_energy;
  double ref_l1 = 0.0;
  for (std::size_t n = 0; n < m; ++n) ref_l1 += std::abs(x_ref[n]);
  out.mae_ratio = mae(x_ref, out.aligned) / (ref_l1 / static_cast<double>(m));
  out.mse_db = to_db(out.mse_ratio, 10.0);
  out.mae_db = to_db(out.mae_ratio, 20.0);

  std::vector<std::size_t> truth;
  for (std::size_t n = 0; n < m; ++n)
    if (x_ref[n] != 0.0) truth.push_back(n);
  out.support_hits =
      support_matches(truth, top_k_indices(out.aligned, truth.size()), support_tolerance);
  return out;
}

double snr_db(const Signal& clean, const Signal& observed) {
  same_length(clean, observed);
  double noise = 0.0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const double d = observed[i] - clean[i];
    noise += d * d;
  }
  const double sig = clean.squared_norm();
  if (noise == 0.0) return kDbClamp;
  if (sig == 0.0) return -kDbClamp;
  return to_db(sig / noise, 10.0);
}

double snr_improvement_db(const Signal& y_noisy, const Signal& y_clean,
                          const Signal& y_reconstructed) {
  same_length(y_noisy, y_clean);
  same_length(y_reconstructed, y_clean);
  return snr_db(y_clean, y_reconstructed) - snr_db(y_clean, y_noisy);
}

double l1_over_l2(const Signal& x) {
  const double l2 = x.norm2();
  if (!(l2 > 0.0)) throw InvalidArgument("l1/l2 of a zero signal is undefined");
  double l1 = 0.0;
  for (double v : x.samples()) l1 += std::abs(v);
  return l1 / l2;
}

}  // namespace sbd
