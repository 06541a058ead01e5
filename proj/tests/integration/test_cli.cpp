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

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "sbd/cli.hpp"
#include "sbd/convolution.hpp"
#include "sbd/io.hpp"

namespace sbd {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = cli::run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(SBD_TOOL_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sbd_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& sub) const { return (dir_ / sub).string(); }
  fs::path dir_;
};

TEST_F(CliTest, SynthPresetWritesInstance) {
  const CliRun r = run({"synth", "--preset", "benchmark", "--out", path("inst")});
  ASSERT_EQ(r.code, 0) << r.err;
  const io::LoadedInstance li = io::load_instance(path("inst"));
  EXPECT_EQ(li.instance.e_true.size(), 200u);
  EXPECT_EQ(li.instance.h_true.size(), 100u);
  EXPECT_EQ(li.instance.y.size(), 299u);
  EXPECT_TRUE(fs::exists(path("inst/manifest.json")));
}

TEST_F(CliTest, SynthImpulsesNoiseless) {
  const CliRun r = run({"synth", "--impulses", "10,62", "--filter-len", "8", "--noise", "none", "--out",
                     path("inst")});
  ASSERT_EQ(r.code, 0) << r.err;
  const io::LoadedInstance li = io::load_instance(path("inst"));
  EXPECT_EQ(li.instance.e_true.size(), 63u);
  EXPECT_EQ(li.instance.y.size(), 63u + 8u - 1u);
  EXPECT_EQ(li.instance.y, li.instance.y_clean);
  EXPECT_EQ(li.instance.e_true[10], 1.0);
  EXPECT_EQ(li.instance.e_true[62], 1.0);
}

TEST_F(CliTest, DeconvolveTraceDescends) {
  ASSERT_EQ(run({"synth", "--preset", "benchmark", "--noise", "sigma:0.01", "--seed", "3", "--out",
                 path("inst")}).code,
            0);
  const CliRun r = run({"deconvolve", "--input", path("inst"), "--h-init", "lp:20", "--out", path("run")});
  ASSERT_EQ(r.code, 0) << r.err;
  const io::CsvTable t = io::read_csv(path("run/trace.csv"));
  ASSERT_EQ(t.header, (std::vector<std::string>{"k", "F", "F_eps", "rel_change"}));
  ASSERT_GE(t.rows.size(), 2u);
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    const double prev = io::parse_double(t.rows[i - 1][2]);
    const double cur = io::parse_double(t.rows[i][2]);
    EXPECT_LE(cur, prev + 1e-10 * (1.0 + std::abs(prev))) << "row " << i;
    EXPECT_GE(cur, io::parse_double(t.rows[i][1]));
  }
  const auto res = io::json::parse(io::read_text(path("run/result.json")));
  EXPECT_EQ(res["descent_violations"], 0);
  EXPECT_GE(res["excitation"]["support_hits"].get<int>(), 5);
  const Signal h = io::read_signal(path("run/h_opt.f64"));
  EXPECT_EQ(h.size(), 100u);
  EXPECT_NEAR(h.norm2(), 1.0, 1e-12);
}

TEST_F(CliTest, MaxOuterOneGivesTwoRecordsAndWarns) {
  ASSERT_EQ(run({"synth", "--preset", "benchmark", "--out", path("inst")}).code, 0);
  const CliRun r = run({"deconvolve", "--input", path("inst"), "--max-outer", "1", "--out", path("run")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(io::read_csv(path("run/trace.csv")).rows.size(), 2u);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
}

TEST_F(CliTest, WavEndToEnd) {
  std::vector<double> e(120, 0.0);
  e[15] = 0.5;
  e[70] = -0.4;
  const Signal y = convolve(Signal{0.6, 0.3, 0.1}, Signal(e));
  io::write_wav(path("y.wav"), y, 8000);
  const CliRun r = run({"deconvolve", "--input", path("y.wav"), "--filter-len", "3", "--out", path("run")});
  ASSERT_EQ(r.code, 0) << r.err;
  const io::WavData w = io::read_wav(path("run/reconstruction.wav"));
  EXPECT_EQ(w.sample_rate, 8000u);
  EXPECT_EQ(w.samples.size(), y.size());
}

TEST_F(CliTest, PlainSignalNeedsFilterLength) {
  io::write_signal(path("y"), Signal{1.0, 2.0, 3.0}, io::SignalMeta{"observation", {}});
  EXPECT_EQ(run({"deconvolve", "--input", path("y.f64"), "--out", path("run")}).code, cli::kBadArgs);
}

TEST_F(CliTest, BoundsCsvColumns) {
  const CliRun r = run({"bounds", "--trials", "200", "--xi-points", "4", "--out", path("b")});
  ASSERT_EQ(r.code, 0) << r.err;
  const io::CsvTable t = io::read_csv(path("b/bounds.csv"));
  EXPECT_EQ(t.header, (std::vector<std::string>{"xi", "empirical", "markov", "hoeffding"}));
  ASSERT_EQ(t.rows.size(), 4u);
  for (const auto& row : t.rows) {
    EXPECT_LE(io::parse_double(row[1]), io::parse_double(row[2]));
    EXPECT_TRUE(std::isnan(io::parse_double(row[3])));
  }
  const auto j = io::json::parse(io::read_text(path("b/bounds.json")));
  EXPECT_EQ(j["mae_bound_violations"], 0);
}

TEST_F(CliTest, BoundsUniformNoiseHasHoeffding) {
  const CliRun r = run({"bounds", "--noise", "uniform:0.05", "--trials", "100", "--xi-points", "3",
                     "--out", path("b")});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const auto& row : io::read_csv(path("b/bounds.csv")).rows)
    EXPECT_FALSE(std::isnan(io::parse_double(row[3])));
}

TEST_F(CliTest, BenchSmoke) {
  const CliRun r = run({"bench", "--trials", "2", "--sigmas", "0.01", "--out", path("bench")});
  ASSERT_EQ(r.code, 0) << r.err;
  const io::CsvTable s = io::read_csv(path("bench/bench.csv"));
  EXPECT_EQ(s.rows.size(), 3u);
  for (const char* col : {"sigma", "method", "e_mse_db", "e_mae_db", "l1_over_l2"})
    EXPECT_NE(std::find(s.header.begin(), s.header.end(), col), s.header.end()) << col;
  EXPECT_EQ(io::read_csv(path("bench/bench_trials.csv")).rows.size(), 6u);
  EXPECT_TRUE(fs::exists(path("bench/timing.csv")));
  const io::RunManifest m = io::read_manifest(path("bench/manifest.json"));
  EXPECT_EQ(m.nondeterministic_artifacts, std::vector<std::string>{"timing.csv"});
}

TEST_F(CliTest, RieszReport) {
  const CliRun r = run({"riesz", "--kernel-values", "1,1", "--input-len", "3", "--out", path("r")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = io::json::parse(io::read_text(path("r/riesz.json")));
  EXPECT_NEAR(j["gersh_lower"].get<double>(), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(j["gersh_upper"].get<double>(), 2.0);
  EXPECT_LE(j["svd_upper"].get<double>(), 2.0 + 1e-12);
}

TEST_F(CliTest, ExitCodesFromBinary) {
  EXPECT_EQ(run_binary("--help"), 0);
  EXPECT_EQ(run_binary("deconvolve --out " + path("x")), cli::kBadArgs);
  EXPECT_EQ(run_binary("deconvolve --input " + path("missing.f64") + " --filter-len 3 --out " +
                       path("x")),
            cli::kIo);
  EXPECT_EQ(run_binary("synth --preset benchmark --noise bogus --out " + path("x")), cli::kBadArgs);
  EXPECT_EQ(run_binary("synth --preset benchmark --out " + path("ok")), 0);
}

TEST_F(CliTest, NumericalFailureExitCode) {
  ASSERT_EQ(run({"synth", "--preset", "benchmark", "--out", path("inst")}).code, 0);
  const CliRun r = run({"deconvolve", "--input", path("inst"), "--p", "1", "--delta", "1e12", "--out",
                     path("run")});
  EXPECT_EQ(r.code, cli::kNumerical);
  EXPECT_TRUE(fs::exists(path("run/trace.csv")));
}

TEST_F(CliTest, ReplayReproducesBytes) {
  ASSERT_EQ(run({"synth", "--preset", "benchmark", "--noise", "snr:20", "--seed", "5", "--out",
                 path("inst")}).code,
            0);
  ASSERT_EQ(run({"deconvolve", "--input", path("inst"), "--h-init", "random:4", "--max-outer", "5",
                 "--out", path("a")}).code,
            0);
  const CliRun r = run({"replay", path("a/manifest.json"), "--out", path("b")});
  ASSERT_EQ(r.code, 0) << r.err;
  const io::RunManifest m = io::read_manifest(path("a/manifest.json"));
  ASSERT_FALSE(m.artifacts.empty());
  for (const std::string& f : m.artifacts)
    EXPECT_EQ(io::read_text(dir_ / "a" / f), io::read_text(dir_ / "b" / f)) << f;
  EXPECT_EQ(io::read_text(path("a/manifest.json")), io::read_text(path("b/manifest.json")));
}

TEST_F(CliTest, OutDirFromEnvironment) {
  ::setenv(cli::kOutDirEnv, path("envout").c_str(), 1);
  const CliRun r = run({"riesz", "--kernel-values", "1,0.5", "--input-len", "4"});
  ::unsetenv(cli::kOutDirEnv);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(path("envout/riesz.json")));
}

}  // namespace
}  // namespace sbd
