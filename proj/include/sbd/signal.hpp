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
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace sbd {

/// A finite, non-empty sequence of real samples.
///
/// Used for every 1-D quantity in the model y = h * e + w: the observation,
/// the kernel, the excitation and the noise. Construction rejects empty input
/// and NaN/Inf samples, so any Signal in hand is safe to feed to the solvers.
class Signal {
 public:
  explicit Signal(std::vector<double> samples);
  Signal(std::initializer_list<double> samples);
  explicit Signal(const Eigen::Ref<const Eigen::VectorXd>& v);

  static Signal zeros(std::size_t n);
  static Signal impulse(std::size_t n, std::size_t at = 0);

  std::size_t size() const { return samples_.size(); }
  double operator[](std::size_t i) const { return samples_[i]; }

  std::span<const double> span() const { return samples_; }
  const std::vector<double>& samples() const { return samples_; }
  const double* data() const { return samples_.data(); }

  Eigen::Map<const Eigen::VectorXd> vec() const {
    return Eigen::Map<const Eigen::VectorXd>(samples_.data(),
                                             static_cast<Eigen::Index>(samples_.size()));
  }

  double norm2() const;
  double squared_norm() const;
  bool is_zero() const;

  Signal scaled(double a) const;

  friend bool operator==(const Signal&, const Signal&) = default;

 private:
  std::vector<double> samples_;
};

}  // namespace sbd
