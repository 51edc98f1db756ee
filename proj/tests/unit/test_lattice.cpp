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

#include <random>

#include "lhiggs/errors.hpp"
#include "lhiggs/lattice.hpp"
#include "support.hpp"

using namespace lhiggs;
using lhiggs::testing::kPi;

namespace {

long long ipow(long long b, int e) {
  long long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Brute-force count of cells of [-N, N]^m by walking every anchor.
std::array<long long, 3> brute_counts(int m, int N) {
  std::array<long long, 3> n{0, 0, 0};
  const long long sites = ipow(2 * N + 1, m);
  for (long long s = 0; s < sites; ++s) {
    std::vector<int> x(m);
    long long r = s;
    for (int i = 0; i < m; ++i) {
      x[i] = static_cast<int>(r % (2 * N + 1)) - N;
      r /= 2 * N + 1;
    }
    ++n[0];
    for (int mu = 0; mu < m; ++mu) {
      if (x[mu] == N) continue;
      ++n[1];
      for (int nu = mu + 1; nu < m; ++nu) {
        if (x[nu] != N) ++n[2];
      }
    }
  }
  return n;
}

Coord at(std::initializer_list<int> v) {
  Coord c{};
  int i = 0;
  for (int x : v) c[i++] = x;
  return c;
}

}  // namespace

TEST_SUITE("dec_lattice") {
  TEST_CASE("box cell counts match formulas and enumeration") {
    for (int m = 1; m <= 4; ++m) {
      for (int N = 1; N <= 3; ++N) {
        const Complex cx = Complex::box(m, N);
        const auto bf = brute_counts(m, N);
        CHECK(static_cast<long long>(cx.count(0)) == ipow(2 * N + 1, m));
        CHECK(static_cast<long long>(cx.count(1)) == m * (2 * N) * ipow(2 * N + 1, m - 1));
        if (m >= 2) {
          CHECK(static_cast<long long>(cx.count(2)) ==
                m * (m - 1) / 2 * (2 * N) * (2 * N) * ipow(2 * N + 1, m - 2));
        }
        for (int d = 0; d < 3; ++d) CHECK(static_cast<long long>(cx.count(d)) == bf[d]);
      }
    }
    const Complex a = Complex::box(2, 1);
    CHECK(a.count(0) == 9);
    CHECK(a.count(1) == 12);
    CHECK(a.count(2) == 4);
    const Complex b = Complex::box(3, 1);
    CHECK(b.count(0) == 27);
    CHECK(b.count(1) == 54);
    CHECK(b.count(2) == 36);
    CHECK(Complex::box(4, 2).count(1) == 2000);
  }

  TEST_CASE("box rejects degenerate sizes") {
    CHECK_THROWS_AS(Complex::box(0, 1), InvalidInput);
    CHECK_THROWS_AS(Complex::box(2, 0), InvalidInput);
  }

  TEST_CASE("oriented cell negation is an involution") {
    const OrientedCell c{Cell::edge(at({0, 0}), 1), 1};
    CHECK((-c).sign == -1);
    CHECK(-(-c) == c);
  }

  TEST_CASE("plaquette boundary traverses the square") {
    Chain p(2);
    p.add(Cell::plaquette(at({0, 0}), 0, 1), 1);
    Chain expect(1);
    expect.add(Cell::edge(at({0, 0}), 0), 1);
    expect.add(Cell::edge(at({1, 0}), 1), 1);
    expect.add(Cell::edge(at({0, 1}), 0), -1);
    expect.add(Cell::edge(at({0, 0}), 1), -1);
    CHECK(boundary(p) == expect);
    CHECK(boundary(boundary(p)).empty());
  }

  TEST_CASE("shared edge cancels in a two-plaquette boundary") {
    Chain p(2);
    p.add(Cell::plaquette(at({0, 0}), 0, 1), 1);
    p.add(Cell::plaquette(at({1, 0}), 0, 1), 1);
    const Chain b = boundary(p);
    CHECK(b.support_size() == 6);
    CHECK(b[Cell::edge(at({1, 0}), 1)] == 0);
  }

  TEST_CASE("boundary rejects cells outside the complex") {
    const Complex cx = Complex::box(2, 1);
    Chain p(2);
    p.add(Cell::plaquette(at({1, 1}), 0, 1), 1);
    CHECK_THROWS_AS(boundary(p, cx), InvalidInput);
    Chain e(1);
    e.add(Cell::edge(at({1, 1}), 0), 1);
    CHECK_THROWS_AS(coboundary(e, cx), InvalidInput);
  }

  TEST_CASE("coboundary of an interior edge") {
    const Complex c2 = Complex::box(2, 1);
    Chain e(1);
    e.add(Cell::edge(at({-1, 0}), 0), 1);
    const Chain cb = coboundary(e, c2);
    CHECK(cb.support_size() == 2);
    // Incidence signs agree with the boundary of each coplaquette.
    for (const auto& [p, s] : cb.coeffs()) {
      Chain pc(2);
      pc.add(p, 1);
      CHECK(boundary(pc)[e.coeffs().begin()->first] == s);
    }

    const Complex c4 = Complex::box(4, 1);
    Chain e4(1);
    e4.add(Cell::edge(at({0, 0, 0, 0}), 0), 1);
    CHECK(coboundary(e4, c4).support_size() == 6);
    CHECK(c4.coplaquettes(c4.index(Cell::edge(at({0, 0, 0, 0}), 0))).size() == 6);
  }

  TEST_CASE("incidence tables agree with the boundary operator") {
    const Complex cx = Complex::box(3, 1);
    for (std::size_t p = 0; p < cx.count(2); ++p) {
      Chain pc(2);
      pc.add(cx.cells(2)[p], 1);
      const Chain b = boundary(pc);
      for (const Incidence& inc : cx.plaquette_edges(static_cast<int>(p))) {
        CHECK(b[cx.cells(1)[inc.index]] == inc.sign);
        bool listed = false;
        for (const Incidence& co : cx.coplaquettes(inc.index)) {
          if (co.index == static_cast<int>(p)) listed = co.sign == inc.sign;
        }
        CHECK(listed);
      }
    }
  }

  TEST_CASE("property: boundary squares to zero and is adjoint to coboundary") {
    std::mt19937_64 rng(7);
    for (int m = 2; m <= 4; ++m) {
      const Complex cx = Complex::box(m, m == 4 ? 1 : 2);
      for (int t = 0; t < 400; ++t) {
        const Chain c2 = testing::random_chain(cx, 2, rng);
        CHECK(boundary(boundary(c2, cx)).empty());
        const Chain a1 = testing::random_chain(cx, 1, rng);
        const Chain b0 = testing::random_chain(cx, 0, rng);
        CHECK(pairing(boundary(a1), b0) == pairing(a1, coboundary(b0, cx)));
        CHECK(pairing(boundary(c2), a1) == pairing(c2, coboundary(a1, cx)));
      }
    }
  }

  TEST_CASE("property: dd vanishes mod 2pi and d matches direct summation") {
    std::mt19937_64 rng(11);
    for (int m = 2; m <= 4; ++m) {
      const Complex cx = Complex::box(m, 1);
      for (int t = 0; t < 50; ++t) {
        const DiffForm phi{0, testing::random_angles(cx.count(0), rng)};
        const DiffForm dd = exterior_derivative(exterior_derivative(phi, cx), cx);
        for (double v : dd.values) CHECK(std::abs(v) <= 1e-12);

        const DiffForm w{1, testing::random_angles(cx.count(1), rng)};
        const DiffForm dw = exterior_derivative(w, cx);
        for (std::size_t p = 0; p < cx.count(2); ++p) {
          double s = 0.0;
          for (const OrientedCell& f : faces(cx.cells(2)[p])) s += w.at(cx, f);
          CHECK(std::abs(wrap_angle(dw.values[p] - s)) <= 1e-12);
          CHECK(dw.values[p] >= -kPi);
          CHECK(dw.values[p] < kPi);
        }
      }
    }
    const Complex cx = Complex::box(2, 1);
    const DiffForm zero{1, std::vector<double>(cx.count(1), 0.0)};
    for (double v : exterior_derivative(zero, cx).values) CHECK(v == 0.0);
  }

  TEST_CASE("form antisymmetry") {
    const Complex cx = Complex::box(2, 1);
    std::mt19937_64 rng(3);
    const DiffForm w{1, testing::random_angles(cx.count(1), rng)};
    for (const Cell& e : cx.cells(1)) {
      const OrientedCell c{e, 1};
      CHECK(w.at(cx, -c) == -w.at(cx, c));
    }
  }

  TEST_CASE("wrap_angle lands in [-pi, pi)") {
    for (double x : {-10.0, -kPi, kPi, 3 * kPi, 0.5, 1e3}) {
      const double w = wrap_angle(x);
      CHECK(w >= -kPi);
      CHECK(w < kPi);
      CHECK(std::abs(std::remainder(w - x, 2 * kPi)) < 1e-12);
    }
  }

  TEST_CASE("adjacency components use shared boundary edges") {
    const Complex cx = Complex::box(2, 1);
    const int p00 = cx.index(Cell::plaquette(at({-1, -1}), 0, 1));
    const int p10 = cx.index(Cell::plaquette(at({0, -1}), 0, 1));
    const int p11 = cx.index(Cell::plaquette(at({0, 0}), 0, 1));
    const std::vector<int> sharing{p00, p10};
    CHECK(adjacency_components(cx, 2, sharing).size() == 1);
    const std::vector<int> corner{p00, p11};
    CHECK(adjacency_components(cx, 2, corner).size() == 2);
    std::vector<int> all(cx.count(2));
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    CHECK(adjacency_components(cx, 2, all).size() == 1);
    const auto comps = adjacency_components(cx, 2, corner);
    CHECK(comps[0][0] < comps[1][0]);
  }

  TEST_CASE("closure adds all faces") {
    const Cell p = Cell::plaquette(at({0, 0, 0}), 0, 2);
    const std::vector<Cell> cells{p};
    const Complex cx = Complex::closure(3, cells);
    CHECK(cx.count(2) == 1);
    CHECK(cx.count(1) == 4);
    CHECK(cx.count(0) == 4);
  }

  TEST_CASE("mf geometry smallest and doubled cases") {
    const Complex cx = Complex::box(3, 3);
    const MfGeometry g = mf_geometry(cx, 1, 1, 1);
    CHECK(g.gamma.length() == 3);
    CHECK(g.gamma_prime.length() == 3);
    const Chain loop = g.gamma.chain + g.gamma_prime.chain;
    CHECK(loop.mass() == 6);
    CHECK(boundary(loop).empty());
    CHECK(boundary(g.gamma.chain) == -boundary(g.gamma_prime.chain));

    const Complex big = Complex::box(2, 4);
    const MfGeometry h = mf_geometry(big, 1, 2, 2);
    CHECK(h.gamma.length() == 8);
    CHECK((h.gamma.chain + h.gamma_prime.chain).mass() == 16);
  }

  TEST_CASE("property: mf geometry paths are valid and close") {
    const Complex cx = Complex::box(2, 4);
    for (int R = 1; R <= 2; ++R) {
      for (int T = 1; T <= 3; ++T) {
        for (int n = 1; n <= 2; ++n) {
          if (2 * R * n > 4 || T * n > 8) continue;
          const MfGeometry g = mf_geometry(cx, R, T, n);
          CHECK(g.gamma.endpoints.size() == 2);
          CHECK(g.gamma_prime.endpoints.size() == 2);
          const PathChain loop = make_path(g.gamma.chain + g.gamma_prime.chain);
          CHECK(loop.is_loop());
          CHECK(loop.length() == static_cast<std::size_t>(2 * (2 * R * n + T * n)));
        }
      }
    }
    CHECK_THROWS_AS(mf_geometry(cx, 5, 1, 1), InvalidInput);
  }

  TEST_CASE("make_path rejects branching chains") {
    Chain c(1);
    c.add(Cell::edge(at({0, 0}), 0), 1);
    c.add(Cell::edge(at({0, 0}), 1), 1);
    c.add(Cell::edge(at({-1, 0}), 0), 1);
    CHECK_THROWS_AS(make_path(c), InvalidInput);
    Chain d(1);
    d.add(Cell::edge(at({0, 0}), 0), 2);
    CHECK_THROWS_AS(make_path(d), InvalidInput);
  }
}
