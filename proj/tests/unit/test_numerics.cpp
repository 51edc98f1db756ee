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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "lhiggs/bessel.hpp"
#include "lhiggs/errors.hpp"
#include "lhiggs/quadrature.hpp"
#include "lhiggs/stats.hpp"
#include "support.hpp"

using namespace lhiggs;
using lhiggs::testing::bessel_integral;
using lhiggs::testing::kPi;
using lhiggs::testing::mean_over_circle;

TEST_SUITE("bessel") {
  TEST_CASE("values at zero and reference points") {
    CHECK(bessel_i(0, 0.0).value == 1.0);
    CHECK(bessel_i(1, 0.0).value == 0.0);
    // Integral representation as the independent oracle.
    CHECK(bessel_i(0, 1.0).value == doctest::Approx(bessel_integral(0, 1.0)).epsilon(1e-13));
    CHECK(bessel_i(1, 1.0).value == doctest::Approx(bessel_integral(1, 1.0)).epsilon(1e-13));
    CHECK(bessel_i(0, 1.0).value == doctest::Approx(1.2660658778).epsilon(1e-10));
    CHECK(bessel_i(1, 1.0).value == doctest::Approx(0.5651591040).epsilon(1e-10));
    for (double x : {0.2, 1.7, 6.0, 20.0}) {
      for (int nu : {0, 2, 5}) {
        CHECK(bessel_i(nu, x).value == doctest::Approx(bessel_integral(nu, x)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("property: three-term recurrence") {
    for (double x : {0.1, 0.5, 1.0, 3.0, 10.0, 30.0}) {
      for (int nu = 1; nu <= 20; ++nu) {
        const double lhs = bessel_i(nu - 1, x).value - bessel_i(nu + 1, x).value;
        const double rhs = 2.0 * nu / x * bessel_i(nu, x).value;
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
      }
    }
  }

  TEST_CASE("argument guard") {
    CHECK_THROWS_AS(bessel_i(0, 50.5), InvalidInput);
    CHECK_THROWS_AS(bessel_i(0, -1.0), InvalidInput);
    CHECK_THROWS_AS(bessel_i(-1, 1.0), InvalidInput);
  }

  TEST_CASE("charge coefficients") {
    CHECK(b_charge(0, 2, 0.5).value == doctest::Approx(bessel_i(0, 1.0).value).epsilon(1e-12));
    CHECK(b_charge(2, 2, 0.5).value == doctest::Approx(bessel_i(1, 1.0).value).epsilon(1e-12));
    CHECK(b_charge(1, 2, 0.0).value == doctest::Approx(2.0 / kPi).epsilon(1e-12));
    for (int k = 1; k <= 3; ++k) {
      for (double kappa : {0.1, 0.5, 1.0}) {
        CHECK(b_charge(0, k, kappa).value == doctest::Approx(bessel_i(0, 2 * kappa).value).epsilon(1e-12));
        CHECK(b_charge(k, k, kappa).value == doctest::Approx(bessel_i(1, 2 * kappa).value).epsilon(1e-12));
      }
    }
    // Direct average over U(1)_2 of cos(t) exp(2 kappa cos 2t).
    const double kappa = 0.37;
    const double direct = mean_over_circle([&](double s) {
      const double t = s / 2.0;  // t in [-pi/2, pi/2]
      return std::cos(t) * std::exp(2 * kappa * std::cos(2 * t));
    });
    CHECK(b_charge(1, 2, kappa).value == doctest::Approx(direct).epsilon(1e-11));
  }

  TEST_CASE("table is decreasing and trivial at zero coupling") {
    const BesselTable t = BesselTable::make(0.7, 12);
    for (int i = 1; i <= 12; ++i) CHECK(t[i] <= t[i - 1]);
    CHECK(t[12] >= 0.0);
    const BesselTable z = BesselTable::make(0.0, 4);
    CHECK(z[0] == 1.0);
    for (int i = 1; i <= 4; ++i) CHECK(z[i] == 0.0);
  }
}

TEST_SUITE("quadrature") {
  TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
    for (int n : {1, 4, 16, 64}) {
      const auto& [x, w] = quad::gauss_legendre(n);
      CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(2.0).epsilon(1e-14));
      for (int d = 0; d <= 2 * n - 1 && d <= 20; ++d) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += w[i] * std::pow(x[i], d);
        const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
        CHECK(s == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
      }
    }
  }

  TEST_CASE("single variable density gives I_0") {
    quad::Problem p;
    p.vars.push_back({-kPi, kPi, 1.3, 1, 0});
    const quad::Result r = quad::integrate(p);
    CHECK(r.value.real() == doctest::Approx(bessel_integral(0, 1.3)).epsilon(1e-12));
    CHECK(std::abs(r.value.imag()) < 1e-14);
    p.vars[0].phase = 2;
    CHECK(quad::integrate(p).value.real() == doctest::Approx(bessel_integral(2, 1.3)).epsilon(1e-12));
  }

  TEST_CASE("two rules agree and order permutations do not change the value") {
    quad::Problem p;
    for (int v = 0; v < 3; ++v) p.vars.push_back({-kPi, kPi, 0.4 + 0.1 * v, 1, v == 0 ? 1 : 0});
    p.terms.push_back({{{0, 1}, {1, 1}, {2, -1}}, 0.6});
    p.terms.push_back({{{1, 1}, {2, 1}}, 0.3, 0.2});
    quad::Options o;
    const auto gl = quad::integrate(p, o);
    o.rule = quad::Rule::trapezoid;
    const auto tr = quad::integrate(p, o);
    CHECK(std::abs(gl.value - tr.value) < 1e-11);
    o.rule = quad::Rule::gauss_legendre;
    o.order = {2, 0, 1};
    CHECK(std::abs(quad::integrate(p, o).value - gl.value) < 1e-12 * std::abs(gl.value));
  }

  TEST_CASE("uncoupled variables split into blocks") {
    quad::Problem p;
    for (int v = 0; v < 4; ++v) p.vars.push_back({-kPi, kPi, 0.0, 1, 0});
    p.terms.push_back({{{0, 1}, {2, 1}}, 0.5});
    const auto b = quad::blocks(p, {0, 1, 2, 3});
    CHECK(b.size() == 3);
  }

  TEST_CASE("input validation and guards") {
    quad::Problem p;
    p.vars.push_back({1.0, 1.0});
    CHECK_THROWS_AS(quad::integrate(p), InvalidInput);
    quad::Problem q;
    for (int v = 0; v < 6; ++v) q.vars.push_back({-kPi, kPi, 1.0, 1, 0});
    for (int v = 0; v < 5; ++v) q.terms.push_back({{{v, 1}, {v + 1, 1}}, 3.0});
    quad::Options o;
    o.max_evals = 1e5;
    CHECK_THROWS_AS(quad::integrate(q, o), ResourceGuard);
  }
}

TEST_SUITE("stats") {
  TEST_CASE("binned estimate of iid data") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g(2.0, 1.0);
    std::vector<double> x(1 << 14);
    for (double& v : x) v = g(rng);
    const Estimate e = binned_estimate(x, 8);
    CHECK(e.n_samples == x.size());
    CHECK(std::abs(e.mean - 2.0) < 4 * e.std_error);
    CHECK(e.std_error == doctest::Approx(1.0 / std::sqrt(double(x.size()))).epsilon(0.35));
    CHECK_THROWS_AS(binned_estimate(std::vector<double>(5, 1.0), 8), InvalidInput);
  }

  TEST_CASE("binning grows errors for correlated data") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> x(1 << 14);
    double a = 0.0;
    for (double& v : x) v = a = 0.95 * a + g(rng);
    const double naive = 3.2 / std::sqrt(double(x.size()));  // sd of AR(1) ~ 3.2
    CHECK(binned_estimate(x, 16).std_error > 3 * naive);
  }

  TEST_CASE("block means and jackknife of a ratio") {
    const std::vector<double> x{1, 2, 3, 4, 5, 6, 7};
    const auto bm = block_means(x, 3);
    REQUIRE(bm.size() == 3);
    CHECK(bm[0] == 1.5);
    CHECK(bm[2] == 5.5);

    std::mt19937_64 rng(2);
    std::normal_distribution<double> g(0.0, 0.1);
    std::vector<double> num(4000), den(4000);
    for (std::size_t i = 0; i < num.size(); ++i) {
      den[i] = 2.0 + g(rng);
      num[i] = 1.0 + g(rng);
    }
    const Estimate r = jackknife({num, den}, 20, [](std::span<const double> m) { return m[0] / m[1]; });
    CHECK(std::abs(r.mean - 0.5) < 4 * r.std_error);
    // Delta method: sd(num/den) ~ 0.1 * sqrt(1/4 + 1/16) / 2 per sample.
    const double delta = std::sqrt(0.01 / 4 + 0.01 / 16 * 0.25) / std::sqrt(4000.0);
    CHECK(r.std_error == doctest::Approx(delta).epsilon(0.5));
  }

  TEST_CASE("compensated sum recovers cancelled digits") {
    CompensatedSum s;
    s.add(1e16);
    s.add(1.0);
    s.add(-1e16);
    CHECK(s.value() == 1.0);
    CompensatedSum a, b;
    for (int i = 0; i < 10; ++i) a.add(0.1);
    b.add(1e20);
    b.add(-1e20);
    a.merge(b);
    CHECK(a.value() == doctest::Approx(1.0).epsilon(1e-16));
  }

  TEST_CASE("decay fit synthetic round trips") {
    const std::pair<int, int> shapes[] = {{1, 1}, {1, 2}, {2, 2}, {1, 3}, {2, 3}, {3, 3}};
    std::vector<LoopPoint> perim, area;
    for (auto [w, h] : shapes) {
      const int P = 2 * (w + h);
      const int A = w * h;
      perim.push_back({P, A, std::exp(-0.3 * P), 1e-6 * std::exp(-0.3 * P)});
      area.push_back({P, A, std::exp(-0.2 * A), 1e-6 * std::exp(-0.2 * A)});
    }
    const DecayFit fp = decay_fit(perim);
    CHECK(fp.c_perim == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(std::abs(fp.c_area) < 1e-9);
    const DecayFit fa = decay_fit(area);
    CHECK(fa.c_area == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(std::abs(fa.c_perim) < 1e-9);
    CHECK(fa.residuals.size() == 6);

    area[5].W = 1e-7;
    area[5].W_err = 1e-6;
    const DecayFit fx = decay_fit(area);
    CHECK(fx.excluded == std::vector<std::size_t>{5});
    CHECK(fx.used.size() == 5);

    std::vector<LoopPoint> few(area.begin(), area.begin() + 3);
    CHECK_THROWS_AS(decay_fit(few), InvalidInput);
  }
}
