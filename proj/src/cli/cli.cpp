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

#include "sbd/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "sbd/alpa.hpp"
#include "sbd/bench.hpp"
#include "sbd/convolution.hpp"
#include "sbd/errors.hpp"
#include "sbd/init_bounds.hpp"
#include "sbd/io.hpp"
#include "sbd/kernels.hpp"
#include "sbd/metrics.hpp"
#include "sbd/synth.hpp"

namespace sbd::cli {

namespace {

namespace fs = std::filesystem;
using io::json;

fs::path default_out_dir() {
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return "sbd_out";
}

// Arguments minus any --out / --out=, so a manifest can be replayed elsewhere.
std::vector<std::string> strip_out(const std::vector<std::string>& args) {
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--out") {
      ++i;
      continue;
    }
    if (args[i].rfind("--out=", 0) == 0) continue;
    kept.push_back(args[i]);
  }
  return kept;
}

std::pair<std::string, std::string> split_kind(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) return {s, ""};
  return {s.substr(0, colon), s.substr(colon + 1)};
}

double number_arg(const std::string& s, const std::string& what) {
  try {
    return io::parse_double(s);
  } catch (const InvalidArgument&) {
    throw InvalidArgument(what + ": '" + s + "' is not a number");
  }
}

std::uint64_t uint_arg(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument(what + ": '" + s + "' is not a non-negative integer");
  }
}

NoiseSpec parse_noise(const std::string& s, std::uint64_t seed) {
  const auto [kind, value] = split_kind(s);
  if (kind == "none") return NoNoise{};
  if (kind == "snr") return AwgnSnrDb{number_arg(value, "--noise snr"), seed};
  if (kind == "sigma") return AwgnSigma{number_arg(value, "--noise sigma"), seed};
  throw InvalidArgument("--noise expects none, snr:<dB> or sigma:<value>");
}

FilterInit parse_h_init(const std::string& s) {
  const auto [kind, value] = split_kind(s);
  if (kind == "impulse") return UnitImpulseInit{};
  if (kind == "random") return SmoothedRandomInit{value.empty() ? 0 : uint_arg(value, "--h-init")};
  if (kind == "lp") return LinearPredictionInit{value.empty() ? 20 : uint_arg(value, "--h-init")};
  if (kind == "file") return UserInit{io::read_signal(value)};
  throw InvalidArgument("--h-init expects impulse, random:<seed>, lp:<order> or file:<path>");
}

struct Outputs {
  fs::path dir;
  io::RunManifest manifest;

  void add(const std::string& name) { manifest.artifacts.push_back(name); }
  void finish() {
    io::write_manifest(dir, manifest);
  }
};

Outputs open_outputs(const fs::path& dir, const std::string& command,
                     const std::vector<std::string>& args) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  Outputs o;
  o.dir = dir;
  o.manifest.command = command;
  o.manifest.argv = strip_out(args);
  o.manifest.tool_version = kToolVersion;
  return o;
}

void write_signal_artifact(Outputs& o, const std::string& name, const Signal& s,
                           const std::string& role,
                           std::optional<std::uint32_t> rate = std::nullopt) {
  io::write_signal(o.dir / name, s, io::SignalMeta{role, rate});
  o.add(name + ".f64");
  o.add(name + ".json");
}

io::CsvTable trace_csv(const IterationTrace& trace) {
  io::CsvTable t{{"k", "F", "F_eps", "rel_change"}, {}};
  for (const auto& r : trace.records)
    t.rows.push_back({std::to_string(r.k), io::format_double(r.costs.f_exact),
                      io::format_double(r.costs.f_eps), io::format_double(r.relative_change)});
  return t;
}

// --- synth -----------------------------------------------------------------

struct SynthArgs {
  std::string preset;
  std::vector<std::size_t> impulses;
  std::size_t length = 0;
  std::vector<double> amplitudes;
  std::size_t period = 0;
  std::size_t count = 0;
  double gpg_p = 0.0;
  double gpg_sigma = 1.0;
  std::size_t gpg_length = 0;
  std::uint64_t gpg_seed = 0;
  std::size_t filter_len = 0;
  std::vector<double> alphas{0.01, 0.014, 0.025};
  std::vector<double> omegas{0.075, 0.138, 0.375};
  std::string filter_file;
  std::string noise = "none";
  std::uint64_t seed = 0;
};

void add_synth(CLI::App& app, SynthArgs& a) {
  app.add_option("--preset", a.preset, "Named instance: benchmark (200 samples, 6 unit spikes, 100-tap filter)")
      ->check(CLI::IsMember({"benchmark"}));
  app.add_option("--impulses", a.impulses, "Spike positions, e.g. 10,62,85")->delimiter(',');
  app.add_option("--length", a.length, "Excitation length (default: last spike + 1)");
  app.add_option("--amplitudes", a.amplitudes, "Spike amplitudes (default: all 1)")->delimiter(',');
  app.add_option("--period", a.period, "Periodic train: spacing T");
  app.add_option("--count", a.count, "Periodic train: number of spikes K");
  app.add_option("--gpg-p", a.gpg_p, "gpG excitation shape p in (0, 1]");
  app.add_option("--gpg-sigma", a.gpg_sigma, "gpG standard deviation");
  app.add_option("--gpg-length", a.gpg_length, "gpG excitation length");
  app.add_option("--gpg-seed", a.gpg_seed, "gpG sampling seed");
  app.add_option("--filter-len", a.filter_len, "Decaying-cosine filter length");
  app.add_option("--alphas", a.alphas, "Decay rates")->delimiter(',');
  app.add_option("--omegas", a.omegas, "Angular frequencies")->delimiter(',');
  app.add_option("--filter", a.filter_file, "Filter from a signal file instead of cosines");
  app.add_option("--noise", a.noise, "none | snr:<dB> | sigma:<value>");
  app.add_option("--seed", a.seed, "Noise seed");
}

SynthSpec build_synth_spec(const SynthArgs& a) {
  if (a.preset == "benchmark") {
    SynthSpec s = benchmark_spec(parse_noise(a.noise, a.seed));
    if (!a.amplitudes.empty()) std::get<ImpulseTrain>(s.excitation).amplitudes = a.amplitudes;
    return s;
  }
  const int kinds = int(!a.impulses.empty()) + int(a.period > 0) + int(a.gpg_p > 0.0);
  if (kinds != 1)
    throw InvalidArgument("give exactly one excitation: --preset, --impulses, --period/--count or --gpg-p");
  ExcitationSpec ex = ImpulseTrain{};
  if (!a.impulses.empty()) {
    std::size_t len = a.length;
    if (len == 0) {
      std::size_t last = 0;
      for (std::size_t i : a.impulses) last = std::max(last, i);
      len = last + 1;
    }
    ex = ImpulseTrain{len, a.impulses, a.amplitudes};
  } else if (a.period > 0) {
    ex = PeriodicTrain{a.period, a.count == 0 ? 1 : a.count, a.amplitudes};
  } else {
    ex = GpgExcitation{a.gpg_p, a.gpg_sigma, a.gpg_length, a.gpg_seed};
  }
  FilterSpec f = DecayingCosines{a.alphas, a.omegas, a.filter_len};
  if (!a.filter_file.empty()) f = UserFilter{io::read_signal(a.filter_file)};
  else if (a.filter_len == 0) throw InvalidArgument("--filter-len or --filter is required");
  return SynthSpec{ex, f, parse_noise(a.noise, a.seed)};
}

int cmd_synth(const SynthArgs& a, const fs::path& out_dir, const std::vector<std::string>& args,
              std::ostream& out) {
  const SynthSpec spec = build_synth_spec(a);
  const Instance inst = make_instance(spec);
  Outputs o = open_outputs(out_dir, "synth", args);
  for (const auto& name : io::write_instance(o.dir, inst, spec)) o.add(name);
  o.manifest.config = io::to_json(spec);
  o.manifest.seeds = {a.seed};
  o.finish();
  out << "instance: M=" << inst.e_true.size() << " L=" << inst.h_true.size()
      << " N=" << inst.y.size() << " snr_db=" << io::format_double(inst.snr_actual_db) << "\n"
      << "written to " << o.dir.string() << "\n";
  return kOk;
}

// --- deconvolve ------------------------------------------------------------

struct DeconvArgs {
  std::string input;
  std::size_t filter_len = 0;
  double p = 0.1;
  double delta = 1.0;
  double epsilon = 1e-6;
  std::size_t inner_iters = 10;
  double inner_tol = 1e-8;
  std::size_t max_outer = 100;
  double outer_tol = 1e-6;
  std::string normalization = "unit";
  double beta = 1.0;
  std::string solve_path = "auto";
  std::string h_init = "impulse";
};

void add_deconvolve(CLI::App& app, DeconvArgs& a) {
  app.add_option("--input", a.input, "Observation: .f64/.json/.wav signal or an instance directory")
      ->required();
  app.add_option("--filter-len", a.filter_len, "Filter length L (default: instance filter length)");
  app.add_option("--p", a.p, "Sparsity exponent in (0, 1]");
  app.add_option("--delta", a.delta, "Regularization weight");
  app.add_option("--epsilon", a.epsilon, "Smoothing constant");
  app.add_option("--inner-iters", a.inner_iters, "Reweighting iterations per e-step");
  app.add_option("--inner-tol", a.inner_tol, "Inner relative-change tolerance");
  app.add_option("--max-outer", a.max_outer, "Maximum outer sweeps");
  app.add_option("--outer-tol", a.outer_tol, "Stop when ||e_k - e_k-1||^2 / ||e_k-1||^2 <= tol");
  app.add_option("--normalization", a.normalization, "unit | rescale | ridge")
      ->check(CLI::IsMember({"unit", "rescale", "ridge"}));
  app.add_option("--beta", a.beta, "Ridge weight for --normalization ridge");
  app.add_option("--solve-path", a.solve_path, "auto | direct | mil")
      ->check(CLI::IsMember({"auto", "direct", "mil"}));
  app.add_option("--h-init", a.h_init, "impulse | random:<seed> | lp:<order> | file:<path>");
}

int cmd_deconvolve(const DeconvArgs& a, const fs::path& out_dir,
                   const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::optional<io::LoadedInstance> inst;
  io::SignalMeta meta;
  std::optional<Signal> y_file;
  const fs::path in(a.input);
  if (fs::is_directory(in) || in.filename() == "instance.json") inst = io::load_instance(in);
  else y_file = io::read_signal(in, &meta);
  const Signal& y = inst ? inst->instance.y : *y_file;

  AlpaConfig cfg;
  cfg.penalty = PenaltyParams(a.p, a.delta, a.epsilon);
  cfg.inner_iters = a.inner_iters;
  cfg.inner_tol = a.inner_tol;
  cfg.max_outer = a.max_outer;
  cfg.outer_tol = a.outer_tol;
  if (a.normalization == "rescale") cfg.normalization = RescaleToUnitNorm{};
  else if (a.normalization == "ridge") cfg.normalization = RidgeNormalization{a.beta};
  cfg.solve_path = a.solve_path == "direct" ? SolvePath::direct
                   : a.solve_path == "mil"  ? SolvePath::mil
                                            : SolvePath::automatic;
  cfg.h_init = parse_h_init(a.h_init);
  cfg.filter_len = a.filter_len;
  if (cfg.filter_len == 0) {
    if (!inst) throw InvalidArgument("--filter-len is required for plain signal input");
    cfg.filter_len = inst->instance.h_true.size();
  }

  Outputs o = open_outputs(out_dir, "deconvolve", args);
  o.manifest.config = io::to_json(cfg);
  if (const auto* r = std::get_if<SmoothedRandomInit>(&cfg.h_init)) o.manifest.seeds = {r->seed};

  DeconvolutionResult res{Signal::zeros(1), Signal::zeros(1), {}, Termination::max_iters};
  try {
    res = run_alpa(y, cfg);
  } catch (const AlpaFailure& f) {
    io::write_csv(o.dir / "trace.csv", trace_csv(f.trace()));
    o.add("trace.csv");
    o.finish();
    throw;
  }

  write_signal_artifact(o, "h_opt", res.h_opt, "filter");
  write_signal_artifact(o, "e_opt", res.e_opt, "excitation");
  io::write_csv(o.dir / "trace.csv", trace_csv(res.trace));
  o.add("trace.csv");

  const TraceCheck chk = check_trace(res.trace, cfg.penalty);
  const auto& last = res.trace.records.back();
  json summary = {{"termination", res.termination == Termination::tolerance_met ? "tolerance_met"
                                                                                 : "max_iters"},
                  {"sweeps", res.trace.records.size() - 1},
                  {"F", last.costs.f_exact},
                  {"F_eps", last.costs.f_eps},
                  {"stationarity_residual", stationarity_residual(y, res.h_opt, res.e_opt, cfg.penalty)},
                  {"descent_violations", chk.descent_violations},
                  {"sandwich_violations", chk.sandwich_violations},
                  {"rise_violations", chk.rise_violations}};
  if (inst) {
    const AlignedError ee = aligned_error(inst->instance.e_true, res.e_opt, true, 1);
    const AlignedError he = aligned_error(inst->instance.h_true.size() == res.h_opt.size()
                                              ? inst->instance.h_true
                                              : res.h_opt,
                                          res.h_opt, true);
    summary["excitation"] = {{"mse_db", ee.mse_db}, {"mae_db", ee.mae_db},
                             {"best_shift", ee.best_shift}, {"support_hits", ee.support_hits}};
    if (inst->instance.h_true.size() == res.h_opt.size())
      summary["filter"] = {{"mse_db", he.mse_db}, {"mae_db", he.mae_db}};
  }
  io::write_text(o.dir / "result.json", summary.dump(2) + "\n");
  o.add("result.json");

  if (meta.sample_rate) {
    io::write_wav(o.dir / "reconstruction.wav", convolve(res.h_opt, res.e_opt), *meta.sample_rate);
    o.add("reconstruction.wav");
  }
  o.finish();

  out << "sweeps=" << res.trace.records.size() - 1 << " F=" << io::format_double(last.costs.f_exact)
      << " F_eps=" << io::format_double(last.costs.f_eps) << "\n";
  if (res.termination == Termination::max_iters)
    err << "warning: stopped at --max-outer " << cfg.max_outer
        << " before the relative change reached " << cfg.outer_tol << "\n";
  return kOk;
}

// --- bounds ----------------------------------------------------------------

struct BoundsArgs {
  std::string instance;
  std::size_t m = 32;
  std::size_t l = 8;
  std::uint64_t excitation_seed = 1;
  double delta = 0.1;
  double dh_fraction = 0.1;
  std::uint64_t dh_seed = 2;
  std::string noise = "gaussian:0.05";
  std::vector<double> xi;
  std::size_t xi_points = 12;
  std::size_t trials = 10000;
  std::uint64_t seed = 1;
  std::string form = "derived";
};

void add_bounds(CLI::App& app, BoundsArgs& a) {
  app.add_option("--instance", a.instance, "Instance directory supplying h* and e*");
  app.add_option("--m", a.m, "Excitation length for the built-in scenario");
  app.add_option("--l", a.l, "Filter length for the built-in scenario");
  app.add_option("--excitation-seed", a.excitation_seed, "gpG seed for the built-in e*");
  app.add_option("--delta", a.delta, "Ridge weight of the initialization");
  app.add_option("--dh-fraction", a.dh_fraction,
                 "Filter error as a fraction of 1/(2 sqrt(M) kappa_q); must be < 1");
  app.add_option("--dh-seed", a.dh_seed, "Direction seed of the filter error");
  app.add_option("--noise", a.noise, "gaussian:<sigma> | uniform:<a>");
  app.add_option("--xi", a.xi, "Explicit xi grid")->delimiter(',');
  app.add_option("--xi-points", a.xi_points, "Points in the automatic xi grid");
  app.add_option("--trials", a.trials, "Monte-Carlo draws");
  app.add_option("--seed", a.seed, "Monte-Carlo seed");
  app.add_option("--form", a.form, "derived (E||w||^2 = N sigma^2) | printed")->check(CLI::IsMember({"printed", "derived"}));
}

BoundInputs build_bound_inputs(const BoundsArgs& a) {
  Signal h_star = Signal::zeros(1);
  Signal e_star = Signal::zeros(1);
  if (!a.instance.empty()) {
    const io::LoadedInstance li = io::load_instance(a.instance);
    h_star = li.instance.h_true.scaled(1.0 / li.instance.h_true.norm2());
    e_star = li.instance.e_true;
  } else {
    h_star = make_filter(DecayingCosines{{0.01, 0.014, 0.025}, {0.075, 0.138, 0.375}, a.l});
    e_star = sample_gpg(1.0, 1.0, a.m, a.excitation_seed);
  }
  const auto [kind, value] = split_kind(a.noise);
  NoiseModel noise = GaussianNoise{};
  if (kind == "gaussian") {
    noise = GaussianNoise{number_arg(value, "--noise gaussian")};
  } else if (kind == "uniform") {
    const double amp = number_arg(value, "--noise uniform");
    noise = BoundedNoise{amp, amp / std::sqrt(3.0)};
  } else {
    throw InvalidArgument("--noise expects gaussian:<sigma> or uniform:<a>");
  }
  Signal h_tilde = perturbed_filter(h_star, e_star.size(), a.delta, a.dh_fraction, a.dh_seed);
  BoundInputs inp{h_star, h_tilde, e_star, a.delta, noise};
  inp.validate();
  return inp;
}

std::vector<double> auto_xi_grid(const BoundInputs& inp, BoundForm form, std::size_t points) {
  const double lo = nontrivial_threshold(inp, form);
  std::vector<double> xi;
  const std::size_t n = std::max<std::size_t>(points, 2);
  for (std::size_t i = 0; i < n; ++i)  // geometric from 1.05x to 4x the threshold
    xi.push_back(lo * 1.05 * std::pow(4.0 / 1.05, static_cast<double>(i) / static_cast<double>(n - 1)));
  return xi;
}

int cmd_bounds(const BoundsArgs& a, const fs::path& out_dir, const std::vector<std::string>& args,
               std::ostream& out) {
  const BoundInputs inp = build_bound_inputs(a);
  const BoundForm form = a.form == "derived" ? BoundForm::derived : BoundForm::printed;
  const std::vector<double> grid = a.xi.empty() ? auto_xi_grid(inp, form, a.xi_points) : a.xi;
  const McTable mc = monte_carlo_validate(inp, grid, a.trials, a.seed, form);
  const BoundReport rep = bound_report(inp, grid, form);

  Outputs o = open_outputs(out_dir, "bounds", args);
  io::CsvTable t{{"xi", "empirical", "markov", "hoeffding"}, {}};
  for (const auto& r : mc.rows)
    t.rows.push_back({io::format_double(r.xi), io::format_double(r.empirical),
                      io::format_double(r.markov), io::format_double(r.hoeffding)});
  io::write_csv(o.dir / "bounds.csv", t);
  o.add("bounds.csv");
  json summary = {{"kappa_q", rep.kappa_q},
                  {"c_delta_h", rep.c_delta_h},
                  {"mae_upper_bound_at_rms_noise", rep.mae_upper_bound},
                  {"nontrivial_threshold", rep.nontrivial_threshold},
                  {"trials", mc.trials},
                  {"mae_bound_violations", mc.mae_violations},
                  {"max_mae", mc.max_mae},
                  {"min_mae_slack", mc.min_mae_slack},
                  {"form", a.form}};
  io::write_text(o.dir / "bounds.json", summary.dump(2) + "\n");
  o.add("bounds.json");
  o.manifest.config = {{"m", inp.m()}, {"l", inp.h_star.size()}, {"delta", a.delta},
                       {"dh_fraction", a.dh_fraction}, {"noise", a.noise}, {"trials", a.trials},
                       {"form", a.form}, {"instance", a.instance}};
  o.manifest.seeds = {a.seed, a.excitation_seed, a.dh_seed};
  o.finish();

  out << io::format_csv(t);
  out << "kappa_q=" << io::format_double(rep.kappa_q) << " C=" << io::format_double(rep.c_delta_h)
      << " MAE-bound violations=" << mc.mae_violations << "/" << mc.trials << "\n";
  return kOk;
}

// --- bench -----------------------------------------------------------------

struct BenchArgs {
  std::string scenario;
  std::size_t trials = 100;
  std::vector<double> sigmas{0.01, 0.02, 0.03};
  std::uint64_t seed = 1;
  std::vector<std::string> methods{"alpa", "reg_ls", "lasso"};
  std::optional<double> reg_ls_delta;
};

void add_bench(CLI::App& app, BenchArgs& a) {
  app.add_option("--scenario", a.scenario, "JSON file with trials, sigmas, seed, methods, reg_ls_delta");
  app.add_option("--trials", a.trials, "Noise realizations per level");
  app.add_option("--sigmas", a.sigmas, "Noise standard deviations")->delimiter(',');
  app.add_option("--seed", a.seed, "Base seed");
  app.add_option("--methods", a.methods, "Subset of alpa,reg_ls,lasso")->delimiter(',');
  app.add_option("--reg-ls-delta", a.reg_ls_delta, "Ridge weight for reg_ls (default 3 sigma ||h||)");
}

int cmd_bench(BenchArgs a, const fs::path& out_dir, const std::vector<std::string>& args,
              std::ostream& out) {
  if (!a.scenario.empty()) {
    json j;
    try {
      j = json::parse(io::read_text(a.scenario));
      if (j.contains("trials")) a.trials = j["trials"];
      if (j.contains("sigmas")) a.sigmas = j["sigmas"].get<std::vector<double>>();
      if (j.contains("seed")) a.seed = j["seed"];
      if (j.contains("methods")) a.methods = j["methods"].get<std::vector<std::string>>();
      if (j.contains("reg_ls_delta")) a.reg_ls_delta = j["reg_ls_delta"].get<double>();
    } catch (const json::exception& e) {
      throw InvalidArgument("bad scenario file: " + std::string(e.what()));
    }
  }
  BenchConfig cfg;
  cfg.trials = a.trials;
  cfg.sigmas = a.sigmas;
  cfg.seed = a.seed;
  cfg.methods = a.methods;
  cfg.reg_ls_delta = a.reg_ls_delta;
  const BenchReport rep = run_bench(cfg);

  Outputs o = open_outputs(out_dir, "bench", args);
  io::write_csv(o.dir / "bench.csv", bench_summary_csv(rep));
  io::write_csv(o.dir / "bench_trials.csv", bench_trials_csv(rep));
  const std::string table = format_bench_table(rep);
  io::write_text(o.dir / "bench.txt", table);
  io::write_csv(o.dir / "timing.csv", bench_timing_csv(rep));
  for (const char* f : {"bench.csv", "bench_trials.csv", "bench.txt"}) o.add(f);
  o.manifest.nondeterministic_artifacts = {"timing.csv"};
  o.manifest.config = {{"trials", cfg.trials},
                       {"sigmas", cfg.sigmas},
                       {"methods", cfg.methods},
                       {"alpa", io::to_json(cfg.alpa)},
                       {"lasso", io::to_json(cfg.lasso)},
                       {"reg_ls_delta", cfg.reg_ls_delta ? json(*cfg.reg_ls_delta) : json("3*sigma*||h||")},
                       {"kernels", std::string(kernels::isa_name(kernels::active().isa))}};
  o.manifest.seeds = {cfg.seed};
  o.finish();
  out << table;
  return kOk;
}

// --- riesz -----------------------------------------------------------------

struct RieszArgs {
  std::string kernel_file;
  std::vector<double> kernel_values;
  std::size_t input_len = 0;
  double eta = 0.5;
};

void add_riesz(CLI::App& app, RieszArgs& a) {
  app.add_option("--kernel", a.kernel_file, "Kernel signal file");
  app.add_option("--kernel-values", a.kernel_values, "Kernel samples, comma separated")->delimiter(',');
  app.add_option("--input-len", a.input_len, "Input length M")->required();
  app.add_option("--eta", a.eta, "Target lower Riesz bound in (0, 1]");
}

int cmd_riesz(const RieszArgs& a, const fs::path& out_dir, const std::vector<std::string>& args,
              std::ostream& out) {
  if (a.kernel_file.empty() == a.kernel_values.empty())
    throw InvalidArgument("give exactly one of --kernel or --kernel-values");
  const Signal k = a.kernel_file.empty() ? Signal(a.kernel_values) : io::read_signal(a.kernel_file);
  const RieszReport r = riesz_report(k, a.input_len, a.eta);
  const json j = {{"gersh_lower", r.gersh_lower},
                  {"gersh_upper", r.gersh_upper},
                  {"svd_lower", r.svd_lower},
                  {"svd_upper", r.svd_upper},
                  {"eta", r.eta},
                  {"eta_sufficient", r.eta_sufficient},
                  {"autocorr_abs_sum", r.autocorr_abs_sum},
                  {"autocorr_half_sum", r.autocorr_half_sum},
                  {"eta_sufficient_half", r.eta_sufficient_half},
                  {"kernel_scale", r.kernel_scale},
                  {"input_len", a.input_len}};
  Outputs o = open_outputs(out_dir, "riesz", args);
  io::write_text(o.dir / "riesz.json", j.dump(2) + "\n");
  o.add("riesz.json");
  o.finish();
  out << j.dump(2) << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
             int depth);

int cmd_replay(const std::string& manifest_path, const std::string& out_override,
               std::ostream& out, std::ostream& err, int depth) {
  if (depth > 0) throw InvalidArgument("a replayed manifest cannot itself be a replay");
  const io::RunManifest m = io::read_manifest(manifest_path);
  const fs::path mp(manifest_path);
  const fs::path dir = !out_override.empty() ? fs::path(out_override)
                       : fs::is_directory(mp) ? mp
                                              : mp.parent_path();
  std::vector<std::string> args{m.command};
  args.insert(args.end(), m.argv.begin() + (m.argv.empty() ? 0 : 1), m.argv.end());
  args.push_back("--out");
  args.push_back(dir.string());
  return dispatch(args, out, err, depth + 1);
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
             int depth) {
  CLI::App app{"Sparse blind deconvolution toolkit", "sbd"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  std::string out_dir;

  SynthArgs synth_a;
  DeconvArgs dec_a;
  BoundsArgs bounds_a;
  BenchArgs bench_a;
  RieszArgs riesz_a;
  std::string replay_manifest;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out_dir, std::string("Output directory (default $") + kOutDirEnv +
                                          " or ./sbd_out)");
  };
  CLI::App* s_synth = app.add_subcommand("synth", "Generate a synthetic instance");
  add_synth(*s_synth, synth_a);
  add_common(s_synth);
  CLI::App* s_dec = app.add_subcommand("deconvolve", "Run blind deconvolution on an observation");
  add_deconvolve(*s_dec, dec_a);
  add_common(s_dec);
  s_dec->set_config("--config", "", "key=value (TOML/INI) file with option defaults");
  CLI::App* s_bounds = app.add_subcommand("bounds", "Initialization error bounds with Monte-Carlo check");
  add_bounds(*s_bounds, bounds_a);
  add_common(s_bounds);
  CLI::App* s_bench = app.add_subcommand("bench", "Noise sweep comparing alpa, reg_ls and lasso");
  add_bench(*s_bench, bench_a);
  add_common(s_bench);
  CLI::App* s_riesz = app.add_subcommand("riesz", "Riesz-bound report for a kernel");
  add_riesz(*s_riesz, riesz_a);
  add_common(s_riesz);
  CLI::App* s_replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  s_replay->add_option("manifest", replay_manifest, "manifest.json or its directory")->required();
  add_common(s_replay);

  std::vector<std::string> argv_store{"sbd"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadArgs;
  }

  const fs::path dir = out_dir.empty() ? default_out_dir() : fs::path(out_dir);
  if (s_synth->parsed()) return cmd_synth(synth_a, dir, args, out);
  if (s_dec->parsed()) return cmd_deconvolve(dec_a, dir, args, out, err);
  if (s_bounds->parsed()) return cmd_bounds(bounds_a, dir, args, out);
  if (s_bench->parsed()) return cmd_bench(bench_a, dir, args, out);
  if (s_riesz->parsed()) return cmd_riesz(riesz_a, dir, args, out);
  return cmd_replay(replay_manifest, out_dir, out, err, depth);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err, 0);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const NumericalFailure& e) {
    err << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const BoundInapplicable& e) {
    err << "error: " << e.what() << "\n";
    return kBadArgs;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kBadArgs;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  }
}

}  // namespace sbd::cli
