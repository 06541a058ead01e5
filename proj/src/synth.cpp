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

#include "sbd/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sbd/convolution.hpp"
#include "sbd/errors.hpp"

namespace sbd {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void check_amplitudes(const std::vector<double>& amps, std::size_t expected) {
  if (!amps.empty() && amps.size() != expected)
    throw InvalidArgument("need one amplitude per spike");
  for (double a : amps)
    if (!std::isfinite(a)) throw InvalidArgument("amplitudes must be finite");
}

double clamp_db(double v) {
  if (std::isnan(v)) return 0.0;
  return std::clamp(v, -300.0, 300.0);
}

void validate_excitation(const ExcitationSpec& excitation) {
  std::visit(overloaded{
                 [](const ImpulseTrain& t) {
                   if (t.length < 1) throw InvalidArgument("excitation length must be >= 1");
                   for (std::size_t i = 0; i < t.indices.size(); ++i) {
                     if (t.indices[i] >= t.length)
                       throw InvalidArgument("impulse index beyond excitation length");
                     if (i > 0 && t.indices[i] <= t.indices[i - 1])
                       throw InvalidArgument("impulse indices must be strictly increasing");
                   }
                   check_amplitudes(t.amplitudes, t.indices.size());
                 },
                 [](const PeriodicTrain& t) {
                   if (t.period < 1 || t.count < 1)
                     throw InvalidArgument("period and count must be >= 1");
                   check_amplitudes(t.amplitudes, t.count);
                 },
                 [](const GpgExcitation& g) {
                   if (!(g.p > 0.0 && g.p <= 1.0)) throw InvalidArgument("gpG p must lie in (0, 1]");
                   if (!(g.sigma_e > 0.0) || !std::isfinite(g.sigma_e))
                     throw InvalidArgument("gpG sigma_e must be > 0");
                   if (g.length < 1) throw InvalidArgument("excitation length must be >= 1");
                 },
             },
             excitation);
}

void validate_filter(const FilterSpec& filter) {
  std::visit(overloaded{
                 [](const DecayingCosines& f) {
                   if (f.length < 1) throw InvalidArgument("filter length must be >= 1");
                   if (f.alphas.empty() || f.alphas.size() != f.omegas.size())
                     throw InvalidArgument("need matching, non-empty alpha and omega lists");
                   for (double a : f.alphas)
                     if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("alphas must be > 0");
                   for (double w : f.omegas)
                     if (!std::isfinite(w)) throw InvalidArgument("omegas must be finite");
                 },
                 [](const UserFilter& u) {
                   if (u.h.is_zero()) throw InvalidArgument("user filter is identically zero");
                 },
             },
             filter);
}

}  // namespace

void SynthSpec::validate() const {
  validate_excitation(excitation);
  validate_filter(filter);
  std::visit(overloaded{
                 [](const NoNoise&) {},
                 [](const AwgnSnrDb& s) {
                   if (!std::isfinite(s.snr_db)) throw InvalidArgument("SNR must be finite");
                 },
                 [](const AwgnSigma& s) {
                   if (!(s.sigma >= 0.0) || !std::isfinite(s.sigma))
                     throw InvalidArgument("noise sigma must be >= 0");
                 },
             },
             noise);
}

Signal sample_gpg(double p, double sigma_e, std::size_t length, std::uint64_t seed) {
  if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("gpG p must lie in (0, 1]");
  if (!(sigma_e > 0.0) || !std::isfinite(sigma_e)) throw InvalidArgument("sigma_e must be > 0");
  if (length < 1) throw InvalidArgument("length must be >= 1");
  const double gamma = std::sqrt(std::tgamma(1.0 / p) / std::tgamma(3.0 / p));
  std::mt19937_64 rng(seed);
  std::gamma_distribution<double> g(1.0 / p, 1.0);
  std::bernoulli_distribution sign(0.5);
  std::vector<double> out(length);
  for (double& v : out) {
    const double mag = gamma * sigma_e * std::pow(g(rng), 1.0 / p);
    v = sign(rng) ? mag : -mag;
  }
  return Signal(std::move(out));
}

Signal make_excitation(const ExcitationSpec& spec) {
  validate_excitation(spec);
  return std::visit(
      overloaded{
          [](const ImpulseTrain& t) {
            std::vector<double> e(t.length, 0.0);
            for (std::size_t i = 0; i < t.indices.size(); ++i)
              e[t.indices[i]] = t.amplitudes.empty() ? 1.0 : t.amplitudes[i];
            return Signal(std::move(e));
          },
          [](const PeriodicTrain& t) {
            std::vector<double> e(t.period * t.count, 0.0);
            for (std::size_t k = 0; k < t.count; ++k)
              e[k * t.period] = t.amplitudes.empty() ? 1.0 : t.amplitudes[k];
            return Signal(std::move(e));
          },
          [](const GpgExcitation& g) { return sample_gpg(g.p, g.sigma_e, g.length, g.seed); },
      },
      spec);
}

Signal make_filter(const FilterSpec& spec) {
  validate_filter(spec);
  const Signal raw = std::visit(
      overloaded{
          [](const DecayingCosines& f) {
            std::vector<double> h(f.length, 0.0);
            for (std::size_t i = 0; i < f.length; ++i) {
              const double n = static_cast<double>(i + 1);  // taps at n = 1 .. length
              for (std::size_t k = 0; k < f.alphas.size(); ++k)
                h[i] += std::exp(-f.alphas[k] * n) * std::cos(f.omegas[k] * n);
            }
            return Signal(std::move(h));
          },
          [](const UserFilter& u) { return u.h; },
      },
      spec);
  const double nrm = raw.norm2();
  if (!(nrm > 0.0)) throw InvalidArgument("filter is identically zero");
  return raw.scaled(1.0 / nrm);
}

Instance make_instance(const SynthSpec& spec) {
  spec.validate();
  Signal h = make_filter(spec.filter);
  Signal e = make_excitation(spec.excitation);
  Signal clean = convolve(h, e);
  const std::size_t n = clean.size();

  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::visit(overloaded{
                 [](const NoNoise&) {},
                 [&](const AwgnSnrDb& s) {
                   sigma = std::sqrt(clean.squared_norm() /
                                     (static_cast<double>(n) * std::pow(10.0, s.snr_db / 10.0)));
                   seed = s.seed;
                 },
                 [&](const AwgnSigma& s) {
                   sigma = s.sigma;
                   seed = s.seed;
                 },
             },
             spec.noise);

  std::vector<double> w(n, 0.0);
  if (sigma > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, sigma);
    for (double& v : w) v = nd(rng);
  }
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = clean[i] + w[i];

  Instance inst{std::move(h), std::move(e), clean, Signal(std::move(y)), Signal(std::move(w)),
                300.0, sigma};
  const double noise_energy = inst.noise.squared_norm();
  if (noise_energy > 0.0)
    inst.snr_actual_db = clamp_db(10.0 * std::log10(clean.squared_norm() / noise_energy));
  return inst;
}

SynthSpec benchmark_spec(NoiseSpec noise) {
  SynthSpec s{ImpulseTrain{200, {10, 62, 85, 100, 150, 182}, {}},
              DecayingCosines{{0.01, 0.014, 0.025}, {0.075, 0.138, 0.375}, 100}, noise};
  return s;
}

}  // namespace sbd
