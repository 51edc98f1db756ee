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
#include <random>

#include "lhiggs/bessel.hpp"
#include "lhiggs/errors.hpp"
#include "lhiggs/polymer.hpp"
#include "support.hpp"

using namespace lhiggs;
using lhiggs::testing::bessel_integral;

namespace {

// Character expansion of one plaquette factor under the product edge density:
// e^{2b cos x} = sum_q I_q(2b) e^{iqx}, E[e^{iq theta}] = I_q(2k)/I_0(2k).
double r_q(int q, double kappa) { return bessel_integral(std::abs(q), 2 * kappa) / bessel_integral(0, 2 * kappa); }

double single_plaquette_phi(double beta, double kappa) {
  double s = 0.0;
  for (int q = -30; q <= 30; ++q) s += bessel_integral(std::abs(q), 2 * beta) * std::pow(r_q(q, kappa), 4);
  return std::exp(-2 * beta) * s - 1.0;
}

// Same with one boundary edge carrying e^{i theta}, times b_0 / b_1.
double shared_edge_phi(double beta, double kappa) {
  double s = 0.0;
  for (int q = -30; q <= 30; ++q) {
    s += bessel_integral(std::abs(q), 2 * beta) * r_q(q + 1, kappa) * std::pow(r_q(q, kappa), 3);
  }
  return (std::exp(-2 * beta) * s - r_q(1, kappa)) / r_q(1, kappa);
}

Coord at(std::initializer_list<int> v) {
  Coord c{};
  int i = 0;
  for (int x : v) c[i++] = x;
  return c;
}

}  // namespace

TEST_SUITE("polymer_engine") {
  TEST_CASE("charge-1 polymer construction") {
    const Complex cx = Complex::box(2, 1);
    const int p0 = cx.index(Cell::plaquette(at({-1, -1}), 0, 1));
    const int p1 = cx.index(Cell::plaquette(at({0, -1}), 0, 1));
    const int p3 = cx.index(Cell::plaquette(at({0, 0}), 0, 1));
    const PolymerK1 a = PolymerK1::make(cx, {p1, p0});
    CHECK(a.touched_edges.size() == 7);
    CHECK(a.plaquettes.front() < a.plaquettes.back());
    CHECK_THROWS_AS(PolymerK1::make(cx, {p0, p3}), InvalidInput);
  }

  TEST_CASE("phi_k1 vanishes at zero beta and matches the character expansion") {
    const Complex cx = Complex::box(2, 1);
    const int p = cx.index(Cell::plaquette(at({0, 0}), 0, 1));
    const PolymerK1 poly = PolymerK1::make(cx, {p});
    const Chain far = [&] {
      Chain c(1);
      c.add(Cell::edge(at({-1, -1}), 0), 1);
      return c;
    }();
    CHECK(phi_k1(cx, poly, far, 1, 0.0, 0.3).magnitude() == 0.0);
    const PolymerValue v = phi_k1(cx, poly, far, 1, 0.2, 0.3);
    CHECK(v.value.real() == doctest::Approx(single_plaquette_phi(0.2, 0.3)).epsilon(1e-7));
    CHECK(std::abs(v.value.imag()) < 1e-12);
    CHECK(v.magnitude() < holder_k1(0.2, 0.3, 2, 1, 0, 1));

    Chain shared(1);
    shared.add(Cell::edge(at({0, 0}), 0), 1);
    const PolymerValue s = phi_k1(cx, poly, shared, 1, 0.2, 0.3);
    CHECK(s.value.real() == doctest::Approx(shared_edge_phi(0.2, 0.3)).epsilon(1e-7));
    CHECK(s.magnitude() <= holder_k1(0.2, 0.3, 2, 1, 1, 1));
  }

  TEST_CASE("Monte Carlo integrator agrees with quadrature") {
    const Complex cx = Complex::box(2, 1);
    const int p = cx.index(Cell::plaquette(at({0, 0}), 0, 1));
    const PolymerK1 poly = PolymerK1::make(cx, {p});
    IntegratorConfig mc;
    mc.max_quad_edges = 0;
    mc.mc_samples = 200000;
    const PolymerValue a = phi_k1(cx, poly, Chain(1), 1, 0.4, 0.3, mc);
    CHECK(a.monte_carlo);
    CHECK(std::abs(a.value.real() - single_plaquette_phi(0.4, 0.3)) < 4 * a.error);
  }

  TEST_CASE("phi_kk reductions") {
    const Complex cx = Complex::box(2, 1);
    const int p = cx.index(Cell::plaquette(at({0, 0}), 0, 1));
    Chain g(1);
    g.add(Cell::edge(at({0, 0}), 0), 1);
    const PolymerKk k1 = PolymerKk::make(cx, {p}, {}, 1);
    const PolymerValue a = phi_kk(cx, k1, g, 1, 0.25, 0.35);
    const PolymerValue b = phi_k1(cx, PolymerK1::make(cx, {p}), g, 1, 0.25, 0.35);
    CHECK(std::abs(a.value - b.value) < 1e-9);
    CHECK(phi_kk(cx, PolymerKk::make(cx, {p}, {}, 2), g, 2, 0.0, 0.35).magnitude() == 0.0);
    CHECK(holder_kk(0.0, 0.3, 2, 2, 2, 1, 1.0, std::vector<int>{0}) == 0.0);
  }

  TEST_CASE("charge-2 plaquette with a residue edge") {
    const Complex cx = Complex::box(2, 1);
    const int p = cx.index(Cell::plaquette(at({0, 0}), 0, 1));
    const int e = cx.index(Cell::edge(at({0, 0}), 0));
    const PolymerKk poly = PolymerKk::make(cx, {p}, {{e, 1}}, 2);
    CHECK(poly.plaquette_residue.at(p) == 1);
    // The residue edge also flips the neighbouring plaquette below it.
    CHECK(poly.plaquette_residue.size() == 2);
    const double beta = 0.3, kappa = 0.2;
    CHECK(zk_prefactor(poly, beta) == doctest::Approx(std::exp(-8 * beta)).epsilon(1e-14));
    const PolymerValue v = phi_kk(cx, poly, Chain(1), 2, beta, kappa);
    CHECK(v.magnitude() <= holder_kk(cx, poly, Chain(1), 2, beta, kappa, 2));
    CHECK_THROWS_AS(PolymerKk::make(cx, {}, {}, 2), InvalidInput);
  }

  TEST_CASE("Hoelder factors") {
    CHECK(holder_k1(0.0, 0.3, 2, 1, 3, 2) == 0.0);
    const double r = bessel_integral(0, 0.6) / bessel_integral(1, 0.6);
    CHECK(holder_k1_proxy(0.1, 0.3, 1) == doctest::Approx(std::pow(r, 4) * (1 - std::exp(-0.4))).epsilon(1e-10));
    CHECK(edge_ratio(1, 1, 0.3) == doctest::Approx(r).epsilon(1e-10));
    double prev = 0.0;
    for (double beta : {0.05, 0.1, 0.2, 0.3, 0.5}) {
      const double f = holder_factor(beta, 0.5, 1, 6);
      CHECK(f > prev);
      CHECK(f < 1.0);
      prev = f;
    }
    double last = 1e9;
    for (double kappa : {0.0, 0.2, 0.5, 1.0, 2.0}) {
      const double f = holder_factor(0.3, kappa, 1, 3);
      CHECK(f < last);
      last = f;
    }
    // k = 1 consistency of the two bounds.
    CHECK(holder_kk(0.3, 0.4, 1, 3, 1, 2, 1.0, std::vector<int>{0, 0}) ==
          doctest::Approx(holder_k1(0.3, 0.4, 3, 1, 2, 2)).epsilon(1e-14));
  }

  TEST_CASE("plaquette partitions") {
    const auto p2 = plaquette_partition(Complex::box(2, 2));
    CHECK(p2.count() == 2);
    CHECK(verify_partition(Complex::box(2, 2), p2));
    const std::vector<Cell> one{Cell::plaquette(Coord{}, 0, 1)};
    CHECK(plaquette_partition(Complex::closure(2, one)).count() == 1);
    const Complex c4 = Complex::box(4, 1);
    const auto p4 = plaquette_partition(c4);
    CHECK(p4.count() <= 1 + p4.max_degree);
    CHECK(verify_partition(c4, p4));
    PlaquettePartition bad = p2;
    bad.classes = {std::vector<int>(Complex::box(2, 2).count(2))};
    for (std::size_t i = 0; i < bad.classes[0].size(); ++i) bad.classes[0][i] = static_cast<int>(i);
    CHECK_FALSE(verify_partition(Complex::box(2, 2), bad));
  }

  TEST_CASE("smallness scan") {
    const std::vector<double> betas{0.0, 0.2, 0.44};
    const std::vector<double> kappas{0.0, 0.1, 0.3};
    const SmallnessReport r = smallness_scan(betas, kappas, 1, 1, 4, 3);
    REQUIRE(r.rows.size() == 9);
    for (int i = 0; i < 3; ++i) {
      CHECK(r.rows[i].g1 == 0.0);
      CHECK(r.rows[i].a_conf == 0.0);
      CHECK(r.rows[i].holder_factor == 0.0);
    }
    CHECK(g1(0.44, 0.0) == doctest::Approx(0.5527).epsilon(1e-4));
    CHECK(r.rows[6].g1 == doctest::Approx(std::expm1(0.44)).epsilon(1e-15));
    for (int b = 1; b < 3; ++b) {
      for (int k = 1; k < 3; ++k) {
        CHECK(r.rows[3 * b + k].g1 > r.rows[3 * b + k - 1].g1);
        CHECK(r.rows[3 * b + k].holder_factor < r.rows[3 * b + k - 1].holder_factor);
      }
    }
    const SmallnessReport q = smallness_scan(betas, kappas, 1, 1, 4, 3, false);
    CHECK(std::isnan(q.rows[4].holder_factor));
  }

  TEST_CASE("property: random polymers respect the Hoelder bounds") {
    std::mt19937_64 rng(17);
    const Complex cx = Complex::box(2, 1);
    const int a_m = plaquette_partition(Complex::box(2, 2)).count();
    std::uniform_real_distribution<double> u(0.05, 0.5);
    for (int t = 0; t < 10; ++t) {
      const int p = static_cast<int>(rng() % cx.count(2));
      const double beta = u(rng), kappa = u(rng);
      Chain g(1);
      g.add(cx.cells(1)[cx.plaquette_edges(p)[rng() % 4].index], 1);
      const PolymerK1 poly = PolymerK1::make(cx, {p});
      CHECK(phi_k1(cx, poly, g, 1, beta, kappa).magnitude() <= holder_k1(beta, kappa, a_m, 1, 1, 1));
      const int e = cx.plaquette_edges(p)[rng() % 4].index;
      const PolymerKk pk = PolymerKk::make(cx, {p}, {{e, 1}}, 2);
      CHECK(phi_kk(cx, pk, g, 2, beta, kappa).magnitude() <= holder_kk(cx, pk, g, 2, beta, kappa, a_m));
    }
  }
}
