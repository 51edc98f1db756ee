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

#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "lhiggs/lattice.hpp"

namespace lhiggs::testing {

inline constexpr double kPi = std::numbers::pi;

/// Random integer chain over the positive d-cells of `cx`.
inline Chain random_chain(const Complex& cx, int d, std::mt19937_64& rng, int terms = 6,
                          int max_coeff = 3) {
  std::uniform_int_distribution<std::size_t> pick(0, cx.count(d) - 1);
  std::uniform_int_distribution<int> coeff(-max_coeff, max_coeff);
  Chain c(d);
  for (int t = 0; t < terms; ++t) c.add(cx.cells(d)[pick(rng)], coeff(rng));
  return c;
}

inline std::vector<double> random_angles(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-kPi, kPi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

/// (1/2pi) Int_{-pi}^{pi} f(t) dt by composite Simpson with `n` panels.
/// Smooth periodic integrands converge fast; kept deliberately plain.
template <class F>
double mean_over_circle(F f, int n = 4000) {
  const double h = 2.0 * kPi / n;
  double s = f(-kPi) + f(kPi);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(-kPi + i * h);
  return s * h / 3.0 / (2.0 * kPi);
}

/// Modified Bessel I_nu(x) from its integral representation, independent of
/// the library's series.
inline double bessel_integral(int nu, double x) {
  return mean_over_circle([&](double t) { return std::exp(x * std::cos(t)) * std::cos(nu * t); });
}

}  // namespace lhiggs::testing
