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

#include <cassert>
#include <cstdlib>
#include <string>

#include "sbd/kernels.hpp"

namespace sbd::kernels {

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(SBD_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
#if defined(SBD_HAVE_AVX2)
  if (isa == Isa::avx2 && isa_available(Isa::avx2)) return avx2_table();
#endif
  return scalar_table();
}

namespace {

const KernelTable& select() {
  if (const char* env = std::getenv("SBD_KERNELS")) {
    if (std::string(env) == "scalar") return scalar_table();
  }
  return table(Isa::avx2);
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& t = select();
  return t;
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return active().dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  active().axpy(alpha, x.data(), y.data(), x.size());
}

void convolve_full(std::span<const double> h, std::span<const double> e, std::span<double> out) {
  assert(!h.empty() && !e.empty() && out.size() == h.size() + e.size() - 1);
  active().convolve_full(h.data(), h.size(), e.data(), e.size(), out.data());
}

void correlate_valid(std::span<const double> h, std::span<const double> y, std::span<double> out) {
  assert(!h.empty() && y.size() >= h.size() && out.size() == y.size() - h.size() + 1);
  active().correlate_valid(h.data(), h.size(), y.data(), y.size(), out.data());
}

}  // namespace sbd::kernels
