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

// Tensor-product quadrature for integrals of the form
//
//   (1/|box|) Int prod_v g_v(x_v) prod_t f_t(sum_v c_tv x_v) exp(i sum_v q_v x_v) dx
//
// with single-angle densities g_v(x) = exp(a_v cos(k_v x)) and coupling terms
// f_t(phi) = exp(a_t (cos(phi + alpha_t) - offset_t)) - subtract_t, optionally
// taken as |f_t|^p. This covers every angle integral in the library: link
// partition functions, polymer weights and Hoelder factors.
//
// Variables that share no term are integrated independently and multiplied.
// Inside a connected block the innermost variable is evaluated over all its
// nodes at once through the vector kernels.

#pragma once

#include <complex>
#include <utility>
#include <vector>

namespace lhiggs::quad {

enum class Rule { gauss_legendre, trapezoid };

struct Variable {
  double lo = 0.0;
  double hi = 0.0;
  double density_a = 0.0;  // g(x) = exp(density_a * cos(density_k * x))
  int density_k = 1;
  int phase = 0;           // q in exp(i q x)
};

struct Term {
  std::vector<std::pair<int, int>> coefs;  // (variable, integer coefficient)
  double a = 0.0;
  double alpha = 0.0;
  double offset = 0.0;
  double subtract = 0.0;
  int power = 1;
  bool absolute = false;
};

struct Problem {
  std::vector<Variable> vars;
  std::vector<Term> terms;
};

struct Options {
  Rule rule = Rule::gauss_legendre;
  int n0 = 16;
  int n_max = 256;
  double rel_tol = 1e-12;
  double abs_tol = 1e-15;
  double max_evals = 4e9;   // total integrand evaluations before refusing
  std::vector<int> order;   // optional permutation of variables (outer first)
};

struct Result {
  std::complex<double> value;
  double error = 0.0;   // |Q(2n) - Q(n)| propagated over blocks
  int nodes = 0;        // largest per-angle node count used
  double evals = 0.0;
};

/// Node doubling from n0 until successive values agree; throws NotConverged
/// or ResourceGuard.
Result integrate(const Problem& p, const Options& opt = {});

/// Single evaluation at a fixed node count (no error estimate).
std::complex<double> integrate_fixed(const Problem& p, Rule rule, int n,
                                     const std::vector<int>& order = {});

/// Gauss-Legendre nodes/weights on [-1, 1] (weights sum to 2). Cached.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n);

/// Connected blocks of variables induced by the terms, each in the given
/// order; exposed for tests.
std::vector<std::vector<int>> blocks(const Problem& p, const std::vector<int>& order);

}  // namespace lhiggs::quad
