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
#include <cstdint>
#include <variant>
#include <vector>

#include "sbd/signal.hpp"

namespace sbd {

/// Spikes at strictly increasing `indices` in an excitation of `length` samples.
/// Empty `amplitudes` means all ones; otherwise one amplitude per index.
struct ImpulseTrain {
  std::size_t length = 0;
  std::vector<std::size_t> indices;
  std::vector<double> amplitudes;
};

/// K spikes spaced T apart starting at 0; excitation length K * T.
struct PeriodicTrain {
  std::size_t period = 1;
  std::size_t count = 1;
  std::vector<double> amplitudes;  // empty: all ones; else size K
};

/// i.i.d. generalized p-Gaussian samples with standard deviation sigma_e.
struct GpgExcitation {
  double p = 1.0;
  double sigma_e = 1.0;
  std::size_t length = 0;
  std::uint64_t seed = 0;
};

using ExcitationSpec = std::variant<ImpulseTrain, PeriodicTrain, GpgExcitation>;

/// h(n) = sum_k exp(-alpha_k n) cos(omega_k n) for n = 1 .. length, then unit normalized.
struct DecayingCosines {
  std::vector<double> alphas;
  std::vector<double> omegas;
  std::size_t length = 0;
};

struct UserFilter {
  Signal h;
};

using FilterSpec = std::variant<DecayingCosines, UserFilter>;

struct NoNoise {};
/// White Gaussian noise with sigma chosen so that ||y_clean||^2 / (N sigma^2) hits the target.
struct AwgnSnrDb {
  double snr_db = 0.0;
  std::uint64_t seed = 0;
};
struct AwgnSigma {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

using NoiseSpec = std::variant<NoNoise, AwgnSnrDb, AwgnSigma>;

struct SynthSpec {
  ExcitationSpec excitation;
  FilterSpec filter;
  NoiseSpec noise = NoNoise{};

  void validate() const;
};

struct Instance {
  Signal h_true;
  Signal e_true;
  Signal y_clean;
  Signal y;
  Signal noise;
  /// 10 log10(||y_clean||^2 / ||w||^2), i.e. the SNR with the sample noise
  /// variance; clamped to [-300, 300] (300 for noise-free instances).
  double snr_actual_db = 300.0;
  /// Standard deviation the noise was drawn with (0 if noise-free).
  double noise_sigma = 0.0;
};

Instance make_instance(const SynthSpec& spec);

Signal make_excitation(const ExcitationSpec& spec);
/// Unit-norm filter.
Signal make_filter(const FilterSpec& spec);

/// Density proportional to exp(-(|e| / (gamma sigma_e))^p) with
/// gamma = sqrt(Gamma(1/p) / Gamma(3/p)), so the variance is sigma_e^2.
Signal sample_gpg(double p, double sigma_e, std::size_t length, std::uint64_t seed);

/// The spike-train benchmark: 200 samples, unit spikes at 10, 62, 85, 100,
/// 150, 182, and a 100-tap filter made of three decaying cosines.
SynthSpec benchmark_spec(NoiseSpec noise = NoNoise{});

}  // namespace sbd
