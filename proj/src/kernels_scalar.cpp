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

#include <cmath>

#include "lhiggs/kernels.hpp"

namespace lhiggs::kernels {
namespace {

void cos_ref(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::cos(x[i]);
}

void sin_ref(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::sin(x[i]);
}

void exp_ref(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(x[i]);
}

double sum_cos_ref(const double* x, double scale, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::cos(scale * x[i]);
  return s;
}

double sum_sin_ref(const double* x, double scale, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::sin(scale * x[i]);
  return s;
}

double dot_ref(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void mul_exp_cos_ref(const double* x, double a, double shift, double offset,
                     double subtract, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] *= std::exp(a * (std::cos(x[i] + shift) - offset)) - subtract;
  }
}

constexpr KernelTable kScalar{
    "scalar",    cos_ref, sin_ref, exp_ref, sum_cos_ref, sum_sin_ref, dot_ref,
    mul_exp_cos_ref,
};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace lhiggs::kernels
