// Copyright 2026 The lhiggs Authors.
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

// Data-parallel inner loops shared by the sampler, the quadrature engine and
// the polymer integrals. Every kernel has a scalar reference implementation;
// vectorised variants are selected at runtime from CPU feature bits and must
// agree with the reference (see tests/test_kernels.cpp for the tolerances).

#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace lhiggs::kernels {

struct KernelTable {
  std::string_view name;
  void (*cos)(const double* x, double* out, std::size_t n);
  void (*sin)(const double* x, double* out, std::size_t n);
  void (*exp)(const double* x, double* out, std::size_t n);
  // Sum of cos(scale * x[i]) and sin(scale * x[i]).
  double (*sum_cos)(const double* x, double scale, std::size_t n);
  double (*sum_sin)(const double* x, double scale, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
  // out[i] *= exp(a * (cos(x[i] + shift) - offset)) - subtract
  void (*mul_exp_cos)(const double* x, double a, double shift, double offset,
                      double subtract, double* out, std::size_t n);
};

enum class Backend { scalar, avx2 };

const KernelTable& scalar_table();

/// The AVX2/FMA table, or nullptr when it was not compiled in or the CPU
/// lacks the instructions.
const KernelTable* avx2_table();

/// Table used by the span wrappers below. Defaults to the best available
/// backend; the LHIGGS_SIMD environment variable ("scalar" / "avx2")
/// overrides the choice at first use.
const KernelTable& active();

/// Force a backend. Returns false (and changes nothing) if unavailable.
bool select(Backend backend);

// Span front ends over active().
void cos(std::span<const double> x, std::span<double> out);
void sin(std::span<const double> x, std::span<double> out);
void exp(std::span<const double> x, std::span<double> out);
double sum_cos(std::span<const double> x, double scale = 1.0);
double sum_sin(std::span<const double> x, double scale = 1.0);
double dot(std::span<const double> a, std::span<const double> b);
void mul_exp_cos(std::span<const double> x, double a, double shift,
                 double offset, double subtract, std::span<double> out);

namespace detail {
const KernelTable* avx2_table_impl();
}

}  // namespace lhiggs::kernels
