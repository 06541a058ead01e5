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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "sbd/alpa.hpp"
#include "sbd/baselines.hpp"
#include "sbd/bench.hpp"
#include "sbd/cli.hpp"
#include "sbd/convolution.hpp"
#include "sbd/costs.hpp"
#include "sbd/init_bounds.hpp"
#include "sbd/io.hpp"
#include "sbd/metrics.hpp"
#include "sbd/synth.hpp"

namespace {

using namespace sbd;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Pinned tolerances and budgets.
constexpr double kDescentSlack = 1e-10;
constexpr double kRiseSlack = 1e-10;
constexpr double kSuiteSeconds = 60.0;
constexpr double kBenchmarkSeconds = 10.0;
constexpr std::size_t kSupportTol = 1;
constexpr double kMilRelTol = 1e-8;
constexpr double kMilFloor = 1e-3;
constexpr double kStressCond = 1e12;
constexpr double kStressResidual = 1e-6;
constexpr double kRieszSlack = 1e-12;
constexpr double kPeriodicTol = 1e-12;
constexpr double kBoundsSeconds = 120.0;
constexpr std::size_t kBoundsTrials = 10000;
constexpr double kSoftThresholdTol = 1e-6;
constexpr double kObjectiveSlack = 1e-12;
constexpr double kSdmmTol = 1e-15;
constexpr std::size_t kBenchTrials = 100;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::cout << (pass ? "PASS" : "FAIL") << " criterion " << id << ": " << detail << std::endl;
  if (!pass) ++failures;
}

// --- 1-3: descent, sandwich and bounded rise on randomized runs --------------

struct SuiteStats {
  std::size_t runs = 0;
  std::size_t steps = 0;
  std::size_t failed_runs = 0;
  std::size_t descent_bad = 0;
  std::size_t sandwich_bad = 0;
  std::size_t rise_bad = 0;
  double worst_descent = -INFINITY;
  double worst_rise_margin = -INFINITY;
  double seconds = 0.0;
};

SuiteStats descent_suite() {
  SuiteStats st;
  const std::size_t ms[] = {50, 200};
  const std::size_t ls[] = {8, 100};
  const double ps[] = {0.1, 0.5, 1.0};
  const double deltas[] = {0.1, 1.0};
  const double eps = 1e-6;
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> alpha(0.005, 0.05), omega(0.05, 1.2);
  const auto t0 = Clock::now();
  for (std::size_t run = 0; run < 50; ++run) {
    const std::size_t m = ms[run % 2], l = ls[(run / 2) % 2];
    const double p = ps[(run / 4) % 3], delta = deltas[(run / 12) % 2];
    const SynthSpec spec{GpgExcitation{0.5, 1.0, m, rng()},
                         DecayingCosines{{alpha(rng), alpha(rng)}, {omega(rng), omega(rng)}, l},
                         AwgnSigma{0.01, rng()}};
    const Instance inst = make_instance(spec);
    AlpaConfig cfg;
    cfg.penalty = PenaltyParams(p, delta, eps);
    cfg.filter_len = l;
    cfg.max_outer = 30;

    IterationTrace trace;
    try {
      trace = run_alpa(inst.y, cfg).trace;
    } catch (const AlpaFailure& f) {
      trace = f.trace();
      ++st.failed_runs;
    }
    ++st.runs;
    const double gap_cap = static_cast<double>(m) * std::pow(eps, p / 2.0);
    const auto& rec = trace.records;
    for (std::size_t k = 0; k < rec.size(); ++k) {
      const double gap = rec[k].costs.f_eps - rec[k].costs.f_exact;
      if (!(gap > 0.0 && gap <= gap_cap)) ++st.sandwich_bad;
      if (k == 0) continue;
      ++st.steps;
      const double fe0 = rec[k - 1].costs.f_eps, fe1 = rec[k].costs.f_eps;
      const double excess = fe1 - fe0;
      st.worst_descent = std::max(st.worst_descent, excess / (1.0 + std::abs(fe0)));
      if (excess > kDescentSlack * (1.0 + std::abs(fe0))) ++st.descent_bad;
      const double rise = rec[k].costs.f_exact - rec[k - 1].costs.f_exact;
      st.worst_rise_margin = std::max(st.worst_rise_margin, rise - gap_cap);
      if (rise > gap_cap + kRiseSlack) ++st.rise_bad;
    }
  }
  st.seconds = seconds_since(t0);
  return st;
}

// --- 4: noiseless benchmark instance ----------------------------------------

void benchmark_instance() {
  const auto t0 = Clock::now();
  const Instance inst = make_instance(benchmark_spec());
  AlpaConfig cfg;
  cfg.penalty = PenaltyParams(0.1, 1.0, 1e-6);
  cfg.filter_len = inst.h_true.size();
  cfg.h_init = LinearPredictionInit{20};
  const DeconvolutionResult res = run_alpa(inst.y, cfg);
  const double secs = seconds_since(t0);
  std::size_t rises = 0, below = 0;
  const auto& rec = res.trace.records;
  for (std::size_t k = 0; k < rec.size(); ++k) {
    if (rec[k].costs.f_eps < rec[k].costs.f_exact) ++below;
    if (k > 0 && rec[k].costs.f_eps > rec[k - 1].costs.f_eps) ++rises;
  }
  const AlignedError ae = aligned_error(inst.e_true, res.e_opt, true, kSupportTol);
  std::ostringstream d;
  d << rec.size() - 1 << " sweeps, F_eps rises=" << rises << ", F_eps<F=" << below
    << ", support hits " << ae.support_hits << "/6 (+-" << kSupportTol << "), e mse "
    << ae.mse_db << " dB, " << secs << " s (limit " << kBenchmarkSeconds << ")";
  report(4, rises == 0 && below == 0 && ae.support_hits == 6 && secs < kBenchmarkSeconds, d.str());
}

// --- 5: MIL / direct equivalence and shrunken stress ------------------------

void mil_equivalence() {
  std::mt19937_64 rng(505);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t l = 1 + rng() % 16, m = 4 + rng() % 60;
    const Signal h = oracle::unit_norm(oracle::gaussian_signal(l, rng));
    const Signal y = oracle::gaussian_signal(l + m - 1, rng);
    std::vector<double> e = oracle::gaussian_vector(m, rng);
    for (double& v : e)
      if (std::abs(v) < kMilFloor) v = v < 0 ? -kMilFloor : kMilFloor;
    AlpaConfig cfg;
    const double ps[] = {0.1, 0.5, 1.0};
    cfg.penalty = PenaltyParams(ps[rep % 3], rep % 2 ? 1.0 : 0.1, 1e-6);
    cfg.filter_len = l;
    cfg.inner_iters = 1 + rep % 4;
    const Signal a = e_step_direct(y, h, Signal(e), cfg).e;
    const Signal b = e_step_mil(y, h, Signal(e), cfg).e;
    worst = std::max(worst, (a.vec() - b.vec()).norm() / a.norm2());
  }

  std::size_t stress_ok = 0;
  double min_cond = INFINITY, max_res = 0.0;
  const int stress_cases = 10;
  for (int rep = 0; rep < stress_cases; ++rep) {
    const std::size_t l = 3 + rng() % 6, m = 12 + rng() % 30;
    const Signal h = oracle::unit_norm(oracle::gaussian_signal(l, rng));
    const Signal y = oracle::gaussian_signal(l + m - 1, rng);
    std::vector<double> e = oracle::gaussian_vector(m, rng);
    for (std::size_t i = rep % 2; i < m; i += 2) e[i] = 1e-12;
    AlpaConfig cfg;
    cfg.penalty = PenaltyParams(0.1, 1.0, 1e-24);
    cfg.filter_len = l;
    cfg.inner_iters = 1;
    const Eigen::VectorXd c = majorizer_curvature(Signal(e).vec(), cfg.penalty);
    Eigen::MatrixXd sys = ConvOperator(h, m).gram();
    sys.diagonal() += c;
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(sys).singularValues();
    const double cond = sv(0) / sv(sv.size() - 1);
    min_cond = std::min(min_cond, cond);
    const Signal out = e_step_mil(y, h, Signal(e), cfg).e;
    const double res = frozen_stationarity_residual(y, h, out.vec(), Signal(e).vec(), cfg.penalty);
    max_res = std::max(max_res, res);
    if (cond > kStressCond && out.vec().allFinite() && res <= kStressResidual) ++stress_ok;
  }
  std::ostringstream d;
  d << "max rel diff " << worst << " (tol " << kMilRelTol << ") over 100 calls; stress "
    << stress_ok << "/" << stress_cases << " with min cond " << min_cond << ", max residual "
    << max_res;
  report(5, worst <= kMilRelTol && stress_ok == static_cast<std::size_t>(stress_cases), d.str());
}

// --- 6: Riesz bounds ----------------------------------------------------------

Eigen::VectorXd gram_spectrum(const Signal& h, std::size_t m) {
  const Eigen::MatrixXd H = oracle::conv_matrix(h, m);
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(H.transpose() * H).eigenvalues();
}

void riesz_bounds() {
  std::mt19937_64 rng(606);
  const double eta = 0.5;
  std::size_t bracket_bad = 0, eta_bad = 0, eta_cases = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t l = 1 + rng() % 32, m = 1 + rng() % 64;
    std::vector<double> h = oracle::gaussian_vector(l, rng);
    if (rep % 2) {  // near-impulse kernels so the eta condition is exercised
      for (double& v : h) v *= 0.05;
      h[rng() % l] = 1.0;
    }
    const Signal k = oracle::unit_norm(Signal(h));
    const RieszReport r = riesz_report(k, m, eta);
    const Eigen::VectorXd ev = gram_spectrum(k, m);
    const double lo = ev.minCoeff(), hi = ev.maxCoeff();
    if (r.gersh_lower > lo + kRieszSlack || hi > r.gersh_upper + kRieszSlack) ++bracket_bad;
    if (r.eta_sufficient) {
      ++eta_cases;
      if (lo < eta - kRieszSlack || hi > 2.0 - eta + kRieszSlack) ++eta_bad;
    }
  }
  const std::size_t period = 7, count = 5;
  const Signal pk = oracle::unit_norm(make_excitation(PeriodicTrain{period, count, {}}));
  const Eigen::VectorXd pev = gram_spectrum(pk, period);
  const double p_err = std::max(std::abs(pev.minCoeff() - 1.0), std::abs(pev.maxCoeff() - 1.0));
  std::ostringstream d;
  d << "bracket violations " << bracket_bad << "/100, eta violations " << eta_bad << "/"
    << eta_cases << ", periodic |sigma^2 - 1| " << p_err;
  report(6, bracket_bad == 0 && eta_bad == 0 && eta_cases > 0 && p_err <= kPeriodicTol, d.str());
}

// --- 7: tail-bound dominance ------------------------------------------------

BoundInputs bound_scenario(NoiseModel noise) {
  const std::size_t m = 32, l = 8;
  const double delta = 0.1;
  const Signal h_star = make_filter(DecayingCosines{{0.01, 0.014, 0.025}, {0.075, 0.138, 0.375}, l});
  const Signal e_star = sample_gpg(1.0, 1.0, m, 1);
  const Signal h_tilde = perturbed_filter(h_star, m, delta, 0.1, 2);
  BoundInputs inp{h_star, h_tilde, e_star, delta, noise};
  inp.validate();
  return inp;
}

std::vector<double> xi_grid(const BoundInputs& inp, BoundForm form) {
  const double lo = nontrivial_threshold(inp, form);
  std::vector<double> xi;
  for (int i = 0; i < 12; ++i) xi.push_back(lo * 1.05 * std::pow(4.0 / 1.05, i / 11.0));
  return xi;
}

struct Dominance {
  std::size_t checked = 0;
  std::size_t violated = 0;
  std::size_t mae_violations = 0;
};

Dominance dominance(const BoundInputs& inp, BoundForm form, bool hoeffding) {
  const McTable t = monte_carlo_validate(inp, xi_grid(inp, form), kBoundsTrials, 7, form);
  Dominance d;
  d.mae_violations = t.mae_violations;
  for (const McRow& r : t.rows) {
    const double b = hoeffding ? r.hoeffding : r.markov;
    if (!(b < 1.0)) continue;
    ++d.checked;
    if (r.empirical > b) ++d.violated;
  }
  return d;
}

void concentration() {
  const auto t0 = Clock::now();
  const BoundInputs g = bound_scenario(GaussianNoise{0.05});
  const BoundInputs u = bound_scenario(BoundedNoise{0.05, 0.05 / std::sqrt(3.0)});
  const BoundGeometry geo = bound_geometry(g);
  const Dominance gm = dominance(g, BoundForm::derived, false);
  const Dominance uh = dominance(u, BoundForm::derived, true);
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << "C=" << geo.c_delta_h << "; Markov/Gaussian violated " << gm.violated << "/" << gm.checked
    << ", Hoeffding/uniform violated " << uh.violated << "/" << uh.checked
    << ", MAE bound violations " << gm.mae_violations + uh.mae_violations << " over "
    << 2 * kBoundsTrials << " draws, " << secs << " s";
  report(7,
         gm.checked > 0 && uh.checked > 0 && gm.violated == 0 && uh.violated == 0 &&
             gm.mae_violations == 0 && uh.mae_violations == 0 && secs < kBoundsSeconds,
         d.str());

  const Dominance pm = dominance(g, BoundForm::printed, false);
  const Dominance pu = dominance(u, BoundForm::printed, false);
  const Dominance ph = dominance(u, BoundForm::printed, true);
  std::cout << "INFO criterion 7 printed-form bounds: Markov/Gaussian violated " << pm.violated
            << "/" << pm.checked << ", Markov/uniform violated " << pu.violated << "/" << pu.checked
            << ", Hoeffding/uniform violated " << ph.violated << "/" << ph.checked << std::endl;
}

// --- 8: baseline sanity -------------------------------------------------------

void baselines() {
  std::mt19937_64 rng(808);
  const Signal y = oracle::gaussian_signal(64, rng);
  LassoConfig cfg;
  cfg.delta = 0.6;
  cfg.max_iters = 500;
  cfg.tol = 1e-14;
  cfg.epsilon_w = 1e-12;
  const LassoResult id = lasso_irls(y, Signal{1.0}, cfg);
  double st_err = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double t = std::copysign(std::max(std::abs(y[i]) - cfg.delta / 2.0, 0.0), y[i]);
    st_err = std::max(st_err, std::abs(id.e[i] - t));
  }

  std::size_t rises = 0;
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t l = 2 + rng() % 10, m = 20 + rng() % 40;
    const Signal h = oracle::unit_norm(oracle::gaussian_signal(l, rng));
    LassoConfig c2;
    c2.delta = 0.05 + 0.1 * rep;
    const LassoResult r = lasso_irls(oracle::gaussian_signal(l + m - 1, rng), h, c2);
    for (std::size_t k = 1; k < r.objective.size(); ++k)
      if (r.objective[k] > r.objective[k - 1] + kObjectiveSlack * (1.0 + r.objective[k - 1])) ++rises;
  }
  const double sdmm = sdmm_delta_rule(oracle::unit_norm(oracle::gaussian_signal(12, rng)), 0.01);
  std::ostringstream d;
  d << "soft-threshold max err " << st_err << ", objective rises " << rises << ", sdmm rule "
    << sdmm;
  report(8, st_err <= kSoftThresholdTol && rises == 0 && std::abs(sdmm - 0.03) <= kSdmmTol, d.str());
}

// --- 9: benchmark ordering ----------------------------------------------------

void ordering() {
  BenchConfig cfg;
  cfg.sigmas = {0.01};
  cfg.trials = kBenchTrials;
  cfg.seed = 1;
  const BenchReport rep = run_bench(cfg);
  const BenchSummary *alpa = nullptr, *reg = nullptr, *lasso = nullptr;
  for (const BenchSummary& s : rep.summary) {
    if (s.method == "alpa") alpa = &s;
    if (s.method == "reg_ls") reg = &s;
    if (s.method == "lasso") lasso = &s;
  }
  if (!alpa || !reg || !lasso) {
    report(9, false, "missing methods in bench summary");
    return;
  }
  std::ostringstream d;
  d << kBenchTrials << " trials: e mse alpa " << alpa->e_mse_db << " dB vs reg_ls " << reg->e_mse_db
    << " dB; l1/l2 alpa " << alpa->l1_over_l2 << " vs lasso " << lasso->l1_over_l2;
  report(9, alpa->e_mse_db < reg->e_mse_db && alpa->l1_over_l2 < lasso->l1_over_l2, d.str());
}

// --- 10: determinism ----------------------------------------------------------

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

int quiet_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int rc = cli::run_cli(args, out, err);
  if (rc != 0) std::cerr << err.str();
  return rc;
}

void determinism() {
  const fs::path root = fs::temp_directory_path() / "sbd_acceptance_determinism";
  fs::remove_all(root);
  const std::string r = root.string();
  bool ok = quiet_cli({"synth", "--preset", "benchmark", "--noise", "snr:25", "--seed", "9", "--out", r + "/inst"}) == 0 &&
            quiet_cli({"deconvolve", "--input", r + "/inst", "--h-init", "lp:20", "--out", r + "/dec"}) == 0 &&
            quiet_cli({"bounds", "--trials", "500", "--noise", "uniform:0.05", "--out", r + "/bounds"}) == 0 &&
            quiet_cli({"bench", "--trials", "2", "--sigmas", "0.02", "--out", r + "/bench"}) == 0;
  std::size_t compared = 0, mismatched = 0;
  for (const char* run : {"inst", "dec", "bounds", "bench"}) {
    const fs::path manifest = root / run / io::kManifestName;
    for (const char* rep : {"a", "b"})
      ok = ok && quiet_cli({"replay", manifest.string(), "--out", r + "/" + run + "_" + rep}) == 0;
    if (!ok) break;
    const io::RunManifest m = io::read_manifest(manifest);
    std::vector<std::string> files = m.artifacts;
    files.push_back(io::kManifestName);
    for (const std::string& f : files) {
      const std::uint64_t h0 = fnv1a(io::read_text(root / run / f));
      const std::uint64_t ha = fnv1a(io::read_text(root / (std::string(run) + "_a") / f));
      const std::uint64_t hb = fnv1a(io::read_text(root / (std::string(run) + "_b") / f));
      ++compared;
      if (h0 != ha || ha != hb) {
        ++mismatched;
        std::cerr << "hash mismatch: " << run << "/" << f << "\n";
      }
    }
  }
  fs::remove_all(root);
  std::ostringstream d;
  d << compared << " artifacts compared across original and two replays, " << mismatched
    << " mismatched";
  report(10, ok && compared > 0 && mismatched == 0, d.str());
}

}  // namespace

int main() {
  const SuiteStats st = descent_suite();
  {
    std::ostringstream d;
    d << st.runs << " runs, " << st.steps << " steps, descent violations " << st.descent_bad
      << " (worst relative excess " << st.worst_descent << "), alpa failures " << st.failed_runs
      << ", " << st.seconds << " s (limit " << kSuiteSeconds << ")";
    report(1, st.descent_bad == 0 && st.failed_runs == 0 && st.seconds < kSuiteSeconds, d.str());
  }
  report(2, st.sandwich_bad == 0,
         "sandwich violations " + std::to_string(st.sandwich_bad) + " over every iterate");
  {
    std::ostringstream d;
    d << "rise violations " << st.rise_bad << ", worst rise minus M eps^(p/2) "
      << st.worst_rise_margin;
    report(3, st.rise_bad == 0, d.str());
  }
  benchmark_instance();
  mil_equivalence();
  riesz_bounds();
  concentration();
  baselines();
  ordering();
  determinism();
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
