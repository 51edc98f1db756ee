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

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string_view>

#include "lhiggs/kernels.hpp"

namespace lhiggs::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* initial_choice() {
  const KernelTable* best = avx2_table();
  if (const char* env = std::getenv("LHIGGS_SIMD")) {
    const std::string_view want(env);
    if (want == "scalar") return &scalar_table();
    if (want == "avx2" && best) return best;
  }
  return best ? best : &scalar_table();
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> table{initial_choice()};
  return table;
}

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("kernels: span length mismatch");
}

}  // namespace

const KernelTable* avx2_table() {
#if defined(LHIGGS_HAVE_AVX2)
  static const bool ok = cpu_has_avx2();
  return ok ? detail::avx2_table_impl() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() { return *slot().load(std::memory_order_relaxed); }

bool select(Backend backend) {
  const KernelTable* t =
      backend == Backend::scalar ? &scalar_table() : avx2_table();
  if (!t) return false;
  slot().store(t, std::memory_order_relaxed);
  return true;
}

void cos(std::span<const double> x, std::span<double> out) {
  check_sizes(x.size(), out.size());
  active().cos(x.data(), out.data(), x.size());
}

void sin(std::span<const double> x, std::span<double> out) {
  check_sizes(x.size(), out.size());
  active().sin(x.data(), out.data(), x.size());
}

void exp(std::span<const double> x, std::span<double> out) {
  check_sizes(x.size(), out.size());
  active().exp(x.data(), out.data(), x.size());
}

double sum_cos(std::span<const double> x, double scale) {
  return active().sum_cos(x.data(), scale, x.size());
}

double sum_sin(std::span<const double> x, double scale) {
  return active().sum_sin(x.data(), scale, x.size());
}

double dot(std::span<const double> a, std::span<const double> b) {
  check_sizes(a.size(), b.size());
  return active().dot(a.data(), b.data(), a.size());
}

void mul_exp_cos(std::span<const double> x, double a, double shift,
                 double offset, double subtract, std::span<double> out) {
  check_sizes(x.size(), out.size());
  active().mul_exp_cos(x.data(), a, shift, offset, subtract, out.data(),
                       x.size());
}

}  // namespace lhiggs::kernels
