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

#include <algorithm>

#include "sbd/kernels.hpp"

namespace sbd::kernels {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void convolve_full_scalar(const double* h, std::size_t lh, const double* e, std::size_t le,
                          double* out) {
  std::fill(out, out + lh + le - 1, 0.0);
  for (std::size_t k = 0; k < lh; ++k) axpy_scalar(h[k], e, out + k, le);
}

void correlate_valid_scalar(const double* h, std::size_t lh, const double* y, std::size_t ly,
                            double* out) {
  const std::size_t m = ly - lh + 1;
  std::fill(out, out + m, 0.0);
  for (std::size_t k = 0; k < lh; ++k) axpy_scalar(h[k], y + k, out, m);
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t{Isa::scalar, dot_scalar, axpy_scalar, convolve_full_scalar,
                             correlate_valid_scalar};
  return t;
}

}  // namespace sbd::kernels
