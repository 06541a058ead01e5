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

// Data-parallel inner loops used by the convolution operators and the
// e-step system assembly. Each primitive has a portable scalar reference
// and an AVX2/FMA variant; the variant is chosen once per process from the
// CPU feature bits. Setting SBD_KERNELS=scalar in the environment forces the
// reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace sbd::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // out[n] = sum_k h[k] e[n-k], out has lh + le - 1 entries (overwritten).
  void (*convolve_full)(const double* h, std::size_t lh, const double* e, std::size_t le,
                        double* out);
  // out[m] = sum_k h[k] y[m+k], out has ly - lh + 1 entries (overwritten).
  void (*correlate_valid)(const double* h, std::size_t lh, const double* y, std::size_t ly,
                          double* out);
};

const KernelTable& scalar_table();
// Only call when isa_available(Isa::avx2).
const KernelTable& avx2_table();

bool isa_available(Isa isa);
const KernelTable& table(Isa isa);
const KernelTable& active();

// Convenience wrappers over active(). Sizes are checked with assert only;
// callers in this library validate shapes before reaching here.
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void convolve_full(std::span<const double> h, std::span<const double> e, std::span<double> out);
void correlate_valid(std::span<const double> h, std::span<const double> y, std::span<double> out);

}  // namespace sbd::kernels
