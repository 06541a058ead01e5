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

#include "sbd/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "sbd/convolution.hpp"
#include "sbd/errors.hpp"
#include "sbd/init_bounds.hpp"
#include "sbd/metrics.hpp"
#include "sbd/synth.hpp"

namespace sbd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double residual_energy(const Signal& y, const Signal& h, const Signal& e) {
  return (convolve(h, e).vec() - y.vec()).squaredNorm();
}

void score(BenchTrial& t, const Instance& inst, const Signal& h, const Signal& e, bool blind) {
  const AlignedError ee = aligned_error(inst.e_true, e, true, 1);
  t.e_mse_db = ee.mse_db;
  t.e_mae_db = ee.mae_db;
  t.support_hits = ee.support_hits;
  if (blind) {
    const AlignedError he = aligned_error(inst.h_true, h, true);
    t.h_mse_db = he.mse_db;
    t.h_mae_db = he.mae_db;
  } else {
    t.h_mse_db = t.h_mae_db = std::numeric_limits<double>::quiet_NaN();
  }
  const AlignedError ye = aligned_error(inst.y_clean, convolve(h, e), false);
  t.y_mse_db = ye.mse_db;
  t.y_mae_db = ye.mae_db;
  t.l1_over_l2 = e.is_zero() ? std::numeric_limits<double>::quiet_NaN() : l1_over_l2(e);
  t.residual = residual_energy(inst.y, h, e);
}

bool has_method(const BenchConfig& cfg, const std::string& m) {
  return std::find(cfg.methods.begin(), cfg.methods.end(), m) != cfg.methods.end();
}

std::string fmt(double v) { return io::format_double(v); }

}  // namespace

AlpaConfig BenchConfig::default_alpa() {
  AlpaConfig c;
  c.filter_len = 100;
  c.h_init = LinearPredictionInit{20};
  return c;
}

void BenchConfig::validate() const {
  if (trials < 1) throw InvalidArgument("bench needs at least one trial");
  if (sigmas.empty()) throw InvalidArgument("bench needs at least one noise level");
  for (double s : sigmas)
    if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidArgument("noise levels must be >= 0");
  if (methods.empty()) throw InvalidArgument("bench needs at least one method");
  for (const auto& m : methods)
    if (m != "alpa" && m != "reg_ls" && m != "lasso")
      throw InvalidArgument("unknown bench method '" + m + "'");
  if (reg_ls_delta && !(*reg_ls_delta >= 0.0)) throw InvalidArgument("reg_ls delta must be >= 0");
  alpa.validate();
}

std::uint64_t bench_noise_seed(std::uint64_t seed, std::size_t sigma_index, std::size_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(sigma_index), static_cast<std::uint32_t>(trial)};
  std::mt19937_64 rng(seq);
  return rng();
}

BenchReport run_bench(const BenchConfig& cfg) {
  cfg.validate();
  BenchReport rep;
  const bool run_alpa_method = has_method(cfg, "alpa");
  for (std::size_t si = 0; si < cfg.sigmas.size(); ++si) {
    const double sigma = cfg.sigmas[si];
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const std::uint64_t nseed = bench_noise_seed(cfg.seed, si, t);
      const Instance inst = make_instance(benchmark_spec(AwgnSigma{sigma, nseed}));
      AlpaConfig acfg = cfg.alpa;
      acfg.filter_len = inst.h_true.size();

      std::optional<double> alpa_residual;
      for (const std::string& method : cfg.methods) {
        BenchTrial row;
        row.sigma = sigma;
        row.trial = t;
        row.noise_seed = nseed;
        row.method = method;
        const auto t0 = Clock::now();
        if (method == "alpa") {
          const DeconvolutionResult r = run_alpa(inst.y, acfg);
          row.seconds = seconds_since(t0);
          row.delta = acfg.penalty.delta();
          score(row, inst, r.h_opt, r.e_opt, true);
          alpa_residual = row.residual;
        } else if (method == "reg_ls") {
          const double d = cfg.reg_ls_delta.value_or(sdmm_delta_rule(inst.h_true, sigma));
          const Signal e = reg_ls_init(inst.y, inst.h_true, d);
          row.seconds = seconds_since(t0);
          row.delta = d;
          score(row, inst, inst.h_true, e, false);
        } else {
          Signal e = Signal::zeros(inst.e_true.size());
          if (run_alpa_method && !alpa_residual)
            throw InvalidArgument("list alpa before lasso to match residuals");
          if (alpa_residual && *alpa_residual > 0.0) {
            const MatchedLasso ml =
                lasso_matched_residual(inst.y, inst.h_true, *alpa_residual, cfg.lasso);
            e = ml.result.e;
            row.delta = ml.delta;
          } else {
            LassoConfig lc = cfg.lasso;
            lc.delta = std::max(sdmm_delta_rule(inst.h_true, sigma), 1e-12);
            e = lasso_irls(inst.y, inst.h_true, lc).e;
            row.delta = lc.delta;
          }
          row.seconds = seconds_since(t0);
          score(row, inst, inst.h_true, e, false);
        }
        rep.trials.push_back(row);
      }
    }
  }

  for (double sigma : cfg.sigmas) {
    for (const std::string& method : cfg.methods) {
      BenchSummary s;
      s.sigma = sigma;
      s.method = method;
      for (const BenchTrial& t : rep.trials) {
        if (t.sigma != sigma || t.method != method) continue;
        ++s.trials;
        s.e_mse_db += t.e_mse_db;
        s.e_mae_db += t.e_mae_db;
        s.h_mse_db += t.h_mse_db;
        s.h_mae_db += t.h_mae_db;
        s.y_mse_db += t.y_mse_db;
        s.y_mae_db += t.y_mae_db;
        s.l1_over_l2 += t.l1_over_l2;
        s.support_hits += static_cast<double>(t.support_hits);
        s.mean_seconds += t.seconds;
      }
      const double n = static_cast<double>(s.trials);
      for (double* v : {&s.e_mse_db, &s.e_mae_db, &s.h_mse_db, &s.h_mae_db, &s.y_mse_db,
                        &s.y_mae_db, &s.l1_over_l2, &s.support_hits, &s.mean_seconds})
        *v /= n;
      rep.summary.push_back(s);
    }
  }
  return rep;
}

io::CsvTable bench_summary_csv(const BenchReport& r) {
  io::CsvTable t{{"sigma", "method", "trials", "e_mse_db", "e_mae_db", "h_mse_db", "h_mae_db",
                  "y_mse_db", "y_mae_db", "l1_over_l2", "support_hits"},
                 {}};
  for (const auto& s : r.summary)
    t.rows.push_back({fmt(s.sigma), s.method, std::to_string(s.trials), fmt(s.e_mse_db),
                      fmt(s.e_mae_db), fmt(s.h_mse_db), fmt(s.h_mae_db), fmt(s.y_mse_db),
                      fmt(s.y_mae_db), fmt(s.l1_over_l2), fmt(s.support_hits)});
  return t;
}

io::CsvTable bench_trials_csv(const BenchReport& r) {
  io::CsvTable t{{"sigma", "trial", "noise_seed", "method", "e_mse_db", "e_mae_db", "h_mse_db",
                  "h_mae_db", "y_mse_db", "y_mae_db", "l1_over_l2", "support_hits", "residual",
                  "delta"},
                 {}};
  for (const auto& x : r.trials)
    t.rows.push_back({fmt(x.sigma), std::to_string(x.trial), std::to_string(x.noise_seed),
                      x.method, fmt(x.e_mse_db), fmt(x.e_mae_db), fmt(x.h_mse_db),
                      fmt(x.h_mae_db), fmt(x.y_mse_db), fmt(x.y_mae_db), fmt(x.l1_over_l2),
                      std::to_string(x.support_hits), fmt(x.residual), fmt(x.delta)});
  return t;
}

io::CsvTable bench_timing_csv(const BenchReport& r) {
  io::CsvTable t{{"sigma", "method", "trials", "mean_seconds"}, {}};
  for (const auto& s : r.summary)
    t.rows.push_back({fmt(s.sigma), s.method, std::to_string(s.trials), fmt(s.mean_seconds)});
  return t;
}

std::string format_bench_table(const BenchReport& r) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-7s %-7s %6s %9s %9s %9s %9s %9s %9s %7s %6s\n", "sigma",
                "method", "trials", "e_mse_dB", "e_mae_dB", "h_mse_dB", "h_mae_dB", "y_mse_dB",
                "y_mae_dB", "l1/l2", "hits");
  out += line;
  for (const auto& s : r.summary) {
    std::snprintf(line, sizeof line,
                  "%-7.3g %-7s %6zu %9.2f %9.2f %9.2f %9.2f %9.2f %9.2f %7.3f %6.2f\n", s.sigma,
                  s.method.c_str(), s.trials, s.e_mse_db, s.e_mae_db, s.h_mse_db, s.h_mae_db,
                  s.y_mse_db, s.y_mae_db, s.l1_over_l2, s.support_hits);
    out += line;
  }
  return out;
}

}  // namespace sbd
