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

#include "lhiggs/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lhiggs/errors.hpp"
#include "lhiggs/quadrature.hpp"

namespace lhiggs {

SeriesValue bessel_i(int nu, double x) {
  if (nu < 0 || nu > 1000) throw InvalidInput("bessel_i: order must be in 0..1000");
  if (!(x >= 0.0) || x > kBesselMaxArg) throw InvalidInput("bessel_i: argument must be in [0, 50]");
  if (x == 0.0) return {nu == 0 ? 1.0 : 0.0, 0.0};

  const double h = 0.5 * x;
  const double q = h * h;
  // First term (x/2)^nu / nu! in log space to stay finite for large nu.
  double term = std::exp(nu * std::log(h) - std::lgamma(nu + 1.0));
  double sum = term;
  double comp = 0.0;
  int t = 0;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (; t < 10000; ++t) {
    const double ratio = q / ((t + 1.0) * (t + 1.0 + nu));
    term *= ratio;
    const double y = term - comp;
    const double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
    // Later ratios only shrink, so the tail is dominated by a geometric series.
    const double next_ratio = q / ((t + 2.0) * (t + 2.0 + nu));
    if (next_ratio < 1.0) {
      const double tail = term * next_ratio / (1.0 - next_ratio);
      if (tail <= 1e-17 * sum) {
        return {sum, tail + 4.0 * eps * sum};
      }
    }
  }
  throw NotConverged("bessel_i: series did not converge");
}

SeriesValue b_charge(int i, int k, double kappa) {
  if (k < 1) throw InvalidInput("b_charge: k must be >= 1");
  if (i < 0) throw InvalidInput("b_charge: index must be >= 0");
  if (!(kappa >= 0.0) || 2.0 * kappa > kBesselMaxArg) throw InvalidInput("b_charge: kappa out of range");
  quad::Problem p;
  quad::Variable v;
  v.lo = -std::numbers::pi / k;
  v.hi = std::numbers::pi / k;
  v.density_a = 2.0 * kappa;
  v.density_k = k;
  v.phase = i;
  p.vars.push_back(v);
  quad::Options opt;
  opt.n0 = 32;
  opt.n_max = 4096;
  opt.rel_tol = 1e-14;
  opt.abs_tol = 1e-15;
  const quad::Result r = quad::integrate(p, opt);
  return {r.value.real(), r.error + 1e-15};
}

BesselTable BesselTable::make(double kappa, int i_max) {
  if (i_max < 0) throw InvalidInput("Bessel table size must be >= 0");
  BesselTable t;
  t.kappa = kappa;
  t.values.reserve(static_cast<std::size_t>(i_max) + 1);
  for (int i = 0; i <= i_max; ++i) {
    const SeriesValue s = bessel_i(i, 2.0 * kappa);
    t.values.push_back(s.value);
    t.accuracy = std::max(t.accuracy, s.error);
  }
  return t;
}

}  // namespace lhiggs
