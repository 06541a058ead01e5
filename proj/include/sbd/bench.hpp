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

// Noise-sweep comparison on the spike-train benchmark instance.
//
// Methods:
//   alpa    blind; filter and excitation estimated from y alone
//   reg_ls  non-blind ridge solve with the true filter
//   lasso   non-blind l1 solve with the true filter; its weight is tuned so
//           that ||y - h * e||^2 equals ALPA's residual on the same trial
//           (or set by the 3 sigma ||h|| rule when ALPA is not run)

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sbd/alpa.hpp"
#include "sbd/baselines.hpp"
#include "sbd/io.hpp"

namespace sbd {

struct BenchConfig {
  std::vector<double> sigmas{0.01, 0.02, 0.03};
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  std::vector<std::string> methods{"alpa", "reg_ls", "lasso"};
  AlpaConfig alpa = default_alpa();
  /// Ridge weight for reg_ls; unset means 3 sigma ||h||.
  std::optional<double> reg_ls_delta;
  LassoConfig lasso{};

  static AlpaConfig default_alpa();
  void validate() const;
};

struct BenchTrial {
  double sigma = 0.0;
  std::size_t trial = 0;
  std::uint64_t noise_seed = 0;
  std::string method;
  double e_mse_db = 0.0;
  double e_mae_db = 0.0;
  double h_mse_db = 0.0;  // NaN for non-blind methods
  double h_mae_db = 0.0;
  double y_mse_db = 0.0;  // reconstruction h * e against y_clean
  double y_mae_db = 0.0;
  double l1_over_l2 = 0.0;
  std::size_t support_hits = 0;  // within +-1 sample
  double residual = 0.0;         // ||y - h * e||^2
  double delta = 0.0;            // regularization weight actually used
  double seconds = 0.0;          // wall time; not part of deterministic output
};

struct BenchSummary {
  double sigma = 0.0;
  std::string method;
  std::size_t trials = 0;
  double e_mse_db = 0.0;  // means over trials of the per-trial dB values
  double e_mae_db = 0.0;
  double h_mse_db = 0.0;
  double h_mae_db = 0.0;
  double y_mse_db = 0.0;
  double y_mae_db = 0.0;
  double l1_over_l2 = 0.0;
  double support_hits = 0.0;
  double mean_seconds = 0.0;
};

struct BenchReport {
  std::vector<BenchTrial> trials;
  std::vector<BenchSummary> summary;
};

/// Noise seed for (sigma index, trial): independent of evaluation order.
std::uint64_t bench_noise_seed(std::uint64_t seed, std::size_t sigma_index, std::size_t trial);

BenchReport run_bench(const BenchConfig& cfg);

io::CsvTable bench_summary_csv(const BenchReport& r);
io::CsvTable bench_trials_csv(const BenchReport& r);
io::CsvTable bench_timing_csv(const BenchReport& r);
std::string format_bench_table(const BenchReport& r);

}  // namespace sbd
