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

#include <bit>
#include <cstring>

#include "sbd/convolution.hpp"
#include "sbd/errors.hpp"
#include "sbd/io.hpp"

namespace sbd::io {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  else return __builtin_bswap64(v);
}

std::string encode_f64(const Signal& s) {
  std::string out(s.size() * 8, '\0');
  for (std::size_t i = 0; i < s.size(); ++i) {
    const std::uint64_t bits = to_le(std::bit_cast<std::uint64_t>(s[i]));
    std::memcpy(out.data() + 8 * i, &bits, 8);
  }
  return out;
}

Signal decode_f64(const std::string& raw, const fs::path& path) {
  if (raw.empty() || raw.size() % 8 != 0)
    throw IoError(path.string() + ": size is not a positive multiple of 8 bytes");
  std::vector<double> v(raw.size() / 8);
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, raw.data() + 8 * i, 8);
    v[i] = std::bit_cast<double>(to_le(bits));
  }
  try {
    return Signal(std::move(v));
  } catch (const InvalidArgument& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

json read_json(const fs::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

std::string lower_ext(const fs::path& p) {
  std::string ext = p.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext;
}

json signal_json(const Signal& s) { return json(s.samples()); }

Signal signal_from_json(const json& j, const char* what) {
  try {
    return Signal(j.get<std::vector<double>>());
  } catch (const json::exception&) {
    throw IoError(std::string("instance field '") + what + "' is not a numeric array");
  }
}

}  // namespace

fs::path write_signal(const fs::path& stem, const Signal& s, const SignalMeta& meta) {
  fs::path bin = stem;
  bin += ".f64";
  fs::path side = stem;
  side += ".json";
  write_text(bin, encode_f64(s));
  json j = {{"format", "float64le"},
            {"file", bin.filename().string()},
            {"length", s.size()},
            {"role", meta.role}};
  if (meta.sample_rate) j["sample_rate"] = *meta.sample_rate;
  write_text(side, j.dump(2) + "\n");
  return bin;
}

Signal read_signal(const fs::path& path, SignalMeta* meta) {
  const std::string ext = lower_ext(path);
  if (ext == ".wav") {
    WavData w = read_wav(path);
    if (meta) *meta = SignalMeta{"observation", w.sample_rate};
    return std::move(w.samples);
  }
  fs::path bin = path;
  fs::path side = path;
  if (ext == ".json") {
    const json j = read_json(path);
    if (!j.contains("file")) throw IoError(path.string() + ": sidecar lacks a 'file' entry");
    bin = path.parent_path() / j["file"].get<std::string>();
  } else if (ext == ".f64") {
    side.replace_extension(".json");
  } else {
    throw UnsupportedFormat(path.string() + ": expected .f64, .json or .wav");
  }
  Signal s = decode_f64(read_text(bin), bin);
  if (fs::exists(side)) {
    const json j = read_json(side);
    if (j.contains("length") && j["length"].get<std::size_t>() != s.size())
      throw IoError(side.string() + ": length does not match " + bin.string());
    if (meta) {
      meta->role = j.value("role", std::string());
      if (j.contains("sample_rate")) meta->sample_rate = j["sample_rate"].get<std::uint32_t>();
    }
  }
  return s;
}

json to_json(const SynthSpec& spec) {
  json j;
  j["excitation"] = std::visit(
      overloaded{
          [](const ImpulseTrain& t) {
            return json{{"type", "impulses"}, {"length", t.length}, {"indices", t.indices},
                        {"amplitudes", t.amplitudes}};
          },
          [](const PeriodicTrain& t) {
            return json{{"type", "periodic"}, {"period", t.period}, {"count", t.count},
                        {"amplitudes", t.amplitudes}};
          },
          [](const GpgExcitation& g) {
            return json{{"type", "gpg"}, {"p", g.p}, {"sigma_e", g.sigma_e}, {"length", g.length},
                        {"seed", g.seed}};
          },
      },
      spec.excitation);
  j["filter"] = std::visit(
      overloaded{
          [](const DecayingCosines& f) {
            return json{{"type", "decaying_cosines"}, {"alphas", f.alphas}, {"omegas", f.omegas},
                        {"length", f.length}};
          },
          [](const UserFilter& u) { return json{{"type", "user"}, {"h", signal_json(u.h)}}; },
      },
      spec.filter);
  j["noise"] = std::visit(
      overloaded{
          [](const NoNoise&) { return json{{"type", "none"}}; },
          [](const AwgnSnrDb& s) {
            return json{{"type", "awgn_snr_db"}, {"snr_db", s.snr_db}, {"seed", s.seed}};
          },
          [](const AwgnSigma& s) {
            return json{{"type", "awgn_sigma"}, {"sigma", s.sigma}, {"seed", s.seed}};
          },
      },
      spec.noise);
  return j;
}

SynthSpec synth_spec_from_json(const json& j) {
  try {
    SynthSpec spec{ImpulseTrain{}, DecayingCosines{}, NoNoise{}};
    const json& ex = j.at("excitation");
    const std::string et = ex.at("type");
    if (et == "impulses") {
      spec.excitation = ImpulseTrain{ex.at("length"), ex.at("indices"),
                                     ex.value("amplitudes", std::vector<double>{})};
    } else if (et == "periodic") {
      spec.excitation = PeriodicTrain{ex.at("period"), ex.at("count"),
                                      ex.value("amplitudes", std::vector<double>{})};
    } else if (et == "gpg") {
      spec.excitation = GpgExcitation{ex.at("p"), ex.at("sigma_e"), ex.at("length"),
                                      ex.value("seed", std::uint64_t{0})};
    } else {
      throw InvalidArgument("unknown excitation type '" + et + "'");
    }
    const json& fl = j.at("filter");
    const std::string ft = fl.at("type");
    if (ft == "decaying_cosines") {
      spec.filter = DecayingCosines{fl.at("alphas"), fl.at("omegas"), fl.at("length")};
    } else if (ft == "user") {
      spec.filter = UserFilter{signal_from_json(fl.at("h"), "filter.h")};
    } else {
      throw InvalidArgument("unknown filter type '" + ft + "'");
    }
    const json& nz = j.at("noise");
    const std::string nt = nz.at("type");
    if (nt == "none") spec.noise = NoNoise{};
    else if (nt == "awgn_snr_db") spec.noise = AwgnSnrDb{nz.at("snr_db"), nz.value("seed", std::uint64_t{0})};
    else if (nt == "awgn_sigma") spec.noise = AwgnSigma{nz.at("sigma"), nz.value("seed", std::uint64_t{0})};
    else throw InvalidArgument("unknown noise type '" + nt + "'");
    return spec;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed synthesis spec: ") + e.what());
  }
}

json to_json(const AlpaConfig& cfg) {
  json j = {{"p", cfg.penalty.p()},
            {"delta", cfg.penalty.delta()},
            {"epsilon", cfg.penalty.epsilon()},
            {"inner_iters", cfg.inner_iters},
            {"inner_tol", cfg.inner_tol},
            {"max_outer", cfg.max_outer},
            {"outer_tol", cfg.outer_tol},
            {"normalization", describe(cfg.normalization)},
            {"solve_path", to_string(cfg.solve_path)},
            {"h_init", describe(cfg.h_init)},
            {"filter_len", cfg.filter_len}};
  if (const auto* u = std::get_if<UserInit>(&cfg.h_init)) j["h_init_values"] = signal_json(u->h);
  return j;
}

json to_json(const LassoConfig& cfg) {
  return json{{"delta", cfg.delta},
              {"max_iters", cfg.max_iters},
              {"tol", cfg.tol},
              {"epsilon_w", cfg.epsilon_w}};
}

std::vector<std::string> write_instance(const fs::path& dir, const Instance& inst,
                                        const SynthSpec& spec) {
  fs::create_directories(dir);
  std::vector<std::string> written;
  const std::pair<const char*, const Signal*> parts[] = {{"y", &inst.y},
                                                         {"y_clean", &inst.y_clean},
                                                         {"h_true", &inst.h_true},
                                                         {"e_true", &inst.e_true},
                                                         {"noise", &inst.noise}};
  json files = json::object();
  json data = json::object();
  for (const auto& [name, sig] : parts) {
    write_signal(dir / name, *sig, SignalMeta{name, std::nullopt});
    files[name] = std::string(name) + ".f64";
    data[name] = signal_json(*sig);
    written.push_back(std::string(name) + ".f64");
    written.push_back(std::string(name) + ".json");
  }
  json j = {{"format", "sbd-instance"},
            {"version", 1},
            {"M", inst.e_true.size()},
            {"L", inst.h_true.size()},
            {"N", inst.y.size()},
            {"snr_actual_db", inst.snr_actual_db},
            {"noise_sigma", inst.noise_sigma},
            {"spec", to_json(spec)},
            {"files", files},
            {"data", data}};
  write_text(dir / "instance.json", j.dump(2) + "\n");
  written.insert(written.begin(), "instance.json");
  return written;
}

LoadedInstance load_instance(const fs::path& path) {
  const fs::path file = fs::is_directory(path) ? path / "instance.json" : path;
  const json j = read_json(file);
  if (j.value("format", std::string()) != "sbd-instance")
    throw UnsupportedFormat(file.string() + ": not an sbd instance file");
  const json& d = j.at("data");
  LoadedInstance out{Instance{signal_from_json(d.at("h_true"), "h_true"),
                              signal_from_json(d.at("e_true"), "e_true"),
                              signal_from_json(d.at("y_clean"), "y_clean"),
                              signal_from_json(d.at("y"), "y"),
                              signal_from_json(d.at("noise"), "noise"),
                              j.value("snr_actual_db", 300.0), j.value("noise_sigma", 0.0)},
                     std::nullopt};
  if (j.contains("spec")) out.spec = synth_spec_from_json(j["spec"]);
  const Signal recomputed = convolve(out.instance.h_true, out.instance.e_true);
  if (!(recomputed == out.instance.y_clean))
    throw IoError(file.string() + ": y_clean does not equal h_true * e_true");
  if (out.instance.y.size() != out.instance.y_clean.size())
    throw IoError(file.string() + ": y and y_clean differ in length");
  return out;
}

void write_manifest(const fs::path& dir, const RunManifest& m) {
  json j = {{"tool", "sbd"},
            {"tool_version", m.tool_version},
            {"command", m.command},
            {"argv", m.argv},
            {"config", m.config},
            {"seeds", m.seeds},
            {"artifacts", m.artifacts},
            {"nondeterministic_artifacts", m.nondeterministic_artifacts}};
  write_text(dir / kManifestName, j.dump(2) + "\n");
}

RunManifest read_manifest(const fs::path& path) {
  const fs::path file = fs::is_directory(path) ? path / kManifestName : path;
  const json j = read_json(file);
  try {
    RunManifest m;
    m.command = j.at("command");
    m.argv = j.at("argv").get<std::vector<std::string>>();
    m.config = j.value("config", json::object());
    m.seeds = j.value("seeds", std::vector<std::uint64_t>{});
    m.artifacts = j.value("artifacts", std::vector<std::string>{});
    m.nondeterministic_artifacts =
        j.value("nondeterministic_artifacts", std::vector<std::string>{});
    m.tool_version = j.value("tool_version", std::string());
    return m;
  } catch (const json::exception& e) {
    throw IoError(file.string() + ": malformed manifest: " + e.what());
  }
}

}  // namespace sbd::io
