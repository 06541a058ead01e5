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

#include "sbd/signal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sbd/errors.hpp"
#include "sbd/kernels.hpp"

namespace sbd {

namespace {

void validate(const std::vector<double>& s) {
  if (s.empty()) throw InvalidArgument("signal must have at least one sample");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isfinite(s[i]))
      throw InvalidArgument("signal sample " + std::to_string(i) + " is not finite");
  }
}

}  // namespace

Signal::Signal(std::vector<double> samples) : samples_(std::move(samples)) { validate(samples_); }

Signal::Signal(std::initializer_list<double> samples) : samples_(samples) { validate(samples_); }

Signal::Signal(const Eigen::Ref<const Eigen::VectorXd>& v)
    : samples_(v.data(), v.data() + v.size()) {
  validate(samples_);
}

Signal Signal::zeros(std::size_t n) { return Signal(std::vector<double>(n, 0.0)); }

Signal Signal::impulse(std::size_t n, std::size_t at) {
  if (at >= n) throw InvalidArgument("impulse position outside signal");
  std::vector<double> s(n, 0.0);
  s[at] = 1.0;
  return Signal(std::move(s));
}

double Signal::squared_norm() const { return kernels::dot(samples_, samples_); }

double Signal::norm2() const { return std::sqrt(squared_norm()); }

bool Signal::is_zero() const {
  return std::all_of(samples_.begin(), samples_.end(), [](double x) { return x == 0.0; });
}

Signal Signal::scaled(double a) const {
  std::vector<double> out(samples_);
  for (double& x : out) x *= a;
  return Signal(std::move(out));
}

}  // namespace sbd
