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

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "lhiggs/kernels.hpp"

using namespace lhiggs;

namespace {

std::vector<double> inputs(std::size_t n, double lo, double hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

// Lengths that exercise the vector body and every tail size.
const std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 31, 64, 1001};

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("scalar table agrees with libm") {
    const kernels::KernelTable& s = kernels::scalar_table();
    const auto x = inputs(257, -20.0, 20.0, 1);
    std::vector<double> c(x.size()), sn(x.size()), e(x.size());
    s.cos(x.data(), c.data(), x.size());
    s.sin(x.data(), sn.data(), x.size());
    s.exp(x.data(), e.data(), x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      CHECK(c[i] == std::cos(x[i]));
      CHECK(sn[i] == std::sin(x[i]));
      CHECK(e[i] == std::exp(x[i]));
    }
  }

  TEST_CASE("avx2 variants match the scalar reference") {
    const kernels::KernelTable* v = kernels::avx2_table();
    if (v == nullptr) {
      MESSAGE("AVX2 unavailable on this CPU; equivalence not exercised");
      return;
    }
    const kernels::KernelTable& s = kernels::scalar_table();
    for (std::size_t n : kLengths) {
      for (auto [lo, hi] : {std::pair{-3.5, 3.5}, std::pair{-200.0, 200.0}, std::pair{-1e6, 1e6}}) {
        const auto x = inputs(n, lo, hi, n + 17);
        std::vector<double> a(n), b(n);
        s.cos(x.data(), a.data(), n);
        v->cos(x.data(), b.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-15 * std::max(1.0, std::abs(x[i])));
        s.sin(x.data(), a.data(), n);
        v->sin(x.data(), b.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-15 * std::max(1.0, std::abs(x[i])));

        const double scale = 3.0;
        const double sc = s.sum_cos(x.data(), scale, n);
        const double ss = s.sum_sin(x.data(), scale, n);
        CHECK(std::abs(sc - v->sum_cos(x.data(), scale, n)) <= 1e-13 * std::max(1.0, double(n)) * std::max(1.0, hi / 100));
        CHECK(std::abs(ss - v->sum_sin(x.data(), scale, n)) <= 1e-13 * std::max(1.0, double(n)) * std::max(1.0, hi / 100));
      }
      const auto x = inputs(n, -700.0, 700.0, n + 5);
      std::vector<double> a(n), b(n);
      s.exp(x.data(), a.data(), n);
      v->exp(x.data(), b.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(a[i] - b[i]) <= 4e-16 * a[i]);

      const auto y = inputs(n, -2.0, 2.0, n + 9);
      CHECK(std::abs(s.dot(x.data(), y.data(), n) - v->dot(x.data(), y.data(), n)) <=
            1e-13 * std::max(1.0, s.dot(x.data(), x.data(), n)));

      const auto ang = inputs(n, -3.2, 3.2, n + 23);
      std::vector<double> o1(n, 1.5), o2(n, 1.5);
      s.mul_exp_cos(ang.data(), 0.6, 0.3, 1.0, 1.0, o1.data(), n);
      v->mul_exp_cos(ang.data(), 0.6, 0.3, 1.0, 1.0, o2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(o1[i] - o2[i]) <= 1e-15 * std::max(1.0, std::abs(o1[i])));
    }
  }

  TEST_CASE("avx2 special values") {
    const kernels::KernelTable* v = kernels::avx2_table();
    if (v == nullptr) return;
    const double inf = std::numeric_limits<double>::infinity();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const std::vector<double> x{0.0, -0.0, nan, inf, -inf, 1e300, -800.0, 800.0};
    std::vector<double> c(x.size()), e(x.size());
    v->cos(x.data(), c.data(), x.size());
    v->exp(x.data(), e.data(), x.size());
    CHECK(c[0] == 1.0);
    CHECK(std::isnan(c[2]));
    CHECK(std::isnan(c[3]));
    CHECK(c[5] == std::cos(1e300));
    CHECK(e[0] == 1.0);
    CHECK(std::isnan(e[2]));
    CHECK(e[3] == inf);
    CHECK(e[4] == 0.0);
    CHECK(e[6] == 0.0);
    CHECK(e[7] == inf);
  }

  TEST_CASE("runtime selection switches backends") {
    const std::vector<double> x{0.1, 0.2, 0.3};
    REQUIRE(kernels::select(kernels::Backend::scalar));
    CHECK(kernels::active().name == kernels::scalar_table().name);
    const double ref = kernels::sum_cos(x);
    if (kernels::select(kernels::Backend::avx2)) {
      CHECK(kernels::sum_cos(x) == doctest::Approx(ref).epsilon(1e-14));
    }
    std::vector<double> wrong(2);
    CHECK_THROWS(kernels::cos(x, wrong));
  }
}
