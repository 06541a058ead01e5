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

// File formats:
//   signals   raw little-endian float64 (<name>.f64) plus a JSON sidecar
//             (<name>.json: length, role, optional sample_rate)
//   audio     WAV, PCM16 mono only
//   tables    RFC 4180 CSV
//   instances instance.json with metadata, inline sample arrays and the
//             names of the per-signal binaries

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sbd/alpa.hpp"
#include "sbd/baselines.hpp"
#include "sbd/signal.hpp"
#include "sbd/synth.hpp"

namespace sbd::io {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct SignalMeta {
  std::string role;
  std::optional<std::uint32_t> sample_rate;
};

/// Writes <stem>.f64 and <stem>.json; returns the .f64 path.
fs::path write_signal(const fs::path& stem, const Signal& s, const SignalMeta& meta);

/// Accepts a .f64 file (sidecar optional), a sidecar .json, or a .wav file.
Signal read_signal(const fs::path& path, SignalMeta* meta = nullptr);

struct WavData {
  Signal samples;  // in [-1, 1)
  std::uint32_t sample_rate = 0;
};

/// Throws UnsupportedFormat for anything but uncompressed 16-bit mono PCM.
WavData read_wav(const fs::path& path);
/// Samples are clipped to [-1, 32767/32768] and rounded to PCM16.
void write_wav(const fs::path& path, const Signal& samples, std::uint32_t sample_rate);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void write_csv(const fs::path& path, const CsvTable& table);
CsvTable read_csv(const fs::path& path);
std::string format_csv(const CsvTable& table);
CsvTable parse_csv(const std::string& text);

/// Shortest round-trip decimal form ("nan", "inf", "-inf" for non-finite).
std::string format_double(double v);
double parse_double(const std::string& s);

json to_json(const SynthSpec& spec);
SynthSpec synth_spec_from_json(const json& j);
json to_json(const AlpaConfig& cfg);
json to_json(const LassoConfig& cfg);

/// Writes instance.json and one .f64/.json pair per signal into `dir`.
/// Returns the written paths relative to `dir`.
std::vector<std::string> write_instance(const fs::path& dir, const Instance& inst,
                                        const SynthSpec& spec);

struct LoadedInstance {
  Instance instance;
  std::optional<SynthSpec> spec;
};

/// Reads instance.json (a directory or the file itself) and checks that
/// y_clean reproduces convolve(h_true, e_true) exactly.
LoadedInstance load_instance(const fs::path& path);

struct RunManifest {
  std::string command;
  std::vector<std::string> argv;  // subcommand arguments without --out
  json config = json::object();
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> artifacts;
  std::vector<std::string> nondeterministic_artifacts;
  std::string tool_version;
};

inline constexpr const char* kManifestName = "manifest.json";

void write_manifest(const fs::path& dir, const RunManifest& m);
RunManifest read_manifest(const fs::path& path);

/// Text is written byte-exactly (no locale, "\n" line endings).
void write_text(const fs::path& path, const std::string& text);
std::string read_text(const fs::path& path);

}  // namespace sbd::io
