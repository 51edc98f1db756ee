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

// Brute-force tensor quadrature of
//
//   Z[gamma] = Int cos(j sigma(gamma)) exp(2 beta sum cos d sigma + 2 kappa sum cos k sigma) prod dtheta/2pi
//
// on complexes with at most five links, and the cross-validation table that
// pits it against the current expansion (and optionally Monte Carlo).

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lhiggs/gibbs.hpp"
#include "lhiggs/lattice.hpp"
#include "lhiggs/quadrature.hpp"

namespace lhiggs {

inline constexpr int kOracleMaxLinks = 5;

struct OracleInstance {
  Complex complex;
  Chain gamma{1};
  int j = 1;
  int k = 1;
  double beta = 0.0;
  double kappa = 0.0;
  int nodes = 16;  // starting nodes per angle, power of two in 16..256
  quad::Rule rule = quad::Rule::gauss_legendre;

  void validate() const;
};

struct OracleValue {
  double value = 0.0;
  double error = 0.0;
  int nodes = 0;
};

/// Z[gamma]; the imaginary part is checked to vanish.
OracleValue quadrature_partition(const OracleInstance& inst);

/// Z[gamma] / Z[0].
OracleValue oracle_expectation(const OracleInstance& inst);

/// Model data for the current-expansion side of a comparison.
struct CurrentsRequest {
  int k = 1;
  int j = 1;
  double beta = 0.0;
  double kappa = 0.0;
  int M = 16;
};

struct CrossCase {
  std::string id;
  OracleInstance instance;
  CurrentsRequest currents;
  std::optional<SamplerConfig> monte_carlo;  // adds a quad-vs-mc row
};

struct CrossRow {
  std::string instance_id;
  std::string method_a;
  std::string method_b;
  double value_a = 0.0;
  double value_b = 0.0;
  double tolerance = 0.0;
  std::string pass;  // "true", "false" or "interval-too-wide"
};

struct CrossReport {
  std::vector<CrossRow> rows;
  std::vector<std::string> failures;
  int flagged = 0;
  bool ok() const { return failures.empty(); }
  std::string csv() const;
};

struct CrossOptions {
  double max_interval_width = 1e-6;  // wider current intervals are flagged
  double mc_sigmas = 4.0;
};

/// Runs every case; the current side must describe the same model as the
/// oracle instance (InvalidInput otherwise).
CrossReport cross_validate(const std::vector<CrossCase>& cases, const CrossOptions& opt = {});

/// Single edge, single plaquette and plaquette with a pendant edge in m = 2,
/// over beta, kappa in {0, 0.1, 0.3}, k in {1, 2}, j in {0, 1, k, 2k}.
std::vector<CrossCase> default_suite(int M = 18);

}  // namespace lhiggs
