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

// Modified Bessel functions of the first kind at integer order, and the
// single-link integrals b_{i,k} over the restricted angle range (-pi/k, pi/k).

#pragma once

#include <vector>

namespace lhiggs {

struct SeriesValue {
  double value = 0.0;
  double error = 0.0;  // bound on truncation plus accumulated rounding
};

inline constexpr double kBesselMaxArg = 50.0;

/// I_nu(x) by its power series; requires 0 <= x <= 50 and 0 <= nu <= 1000.
SeriesValue bessel_i(int nu, double x);

/// b_{i,k}(kappa) = (k / 2pi) Int_{-pi/k}^{pi/k} cos(i t) exp(2 kappa cos(k t)) dt
/// by Gauss-Legendre quadrature. For k | i this equals I_{i/k}(2 kappa).
SeriesValue b_charge(int i, int k, double kappa);

/// b_i = I_i(2 kappa) for i = 0..i_max.
struct BesselTable {
  double kappa = 0.0;
  std::vector<double> values;
  double accuracy = 0.0;  // max absolute error over the table

  static BesselTable make(double kappa, int i_max);
  double operator[](int i) const { return values.at(static_cast<std::size_t>(i)); }
};

}  // namespace lhiggs
