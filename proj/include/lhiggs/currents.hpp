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

// Exact current expansion. For a symmetric set of interaction chains xi with
// couplings beta_xi,
//
//   Int rho(sigma(gamma)) exp(sum_xi beta_xi rho(sigma(xi))) dmu
//     = sum over n >= 0 with  sum_xi xi[c] n[xi] + gamma[c] = 0 for all cells c
//       of prod_xi beta_xi^n[xi] / n[xi]!
//
// The charge-k Higgs model uses xi = +-boundary(p) (coupling beta) and
// xi = +-k e (coupling kappa); both orientations are separate terms. Sums are
// truncated at total occupancy M with a rigorous Poisson tail bound.

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "lhiggs/lattice.hpp"

namespace lhiggs {

struct InteractionTerm {
  std::vector<std::pair<int, int>> support;  // (cell index in C_ell, coefficient)
  double coupling = 0.0;
  OrientedCell label;  // generating cell, e.g. -p for the term -boundary(p)
  int partner = -1;    // index of the negated term
};

class InteractionSet {
 public:
  /// Plaquette terms +-boundary(p) with coupling beta, then edge terms
  /// +-k e with coupling kappa (k = 0 gives the zero chain).
  static InteractionSet charge_k(const Complex& cx, int k, double beta, double kappa);
  /// Plaquette terms only.
  static InteractionSet pure_gauge(const Complex& cx, double beta);
  /// Spin model on vertices: terms +-boundary(e), coupling kappa (ell = 0).
  static InteractionSet xy(const Complex& cx, double kappa);
  /// Arbitrary chains over ell-cells; the negations are appended.
  static InteractionSet from_chains(const Complex& cx, int ell,
                                    const std::vector<std::pair<Chain, double>>& terms);

  int ell() const { return ell_; }
  int charge() const { return k_; }
  const Complex& complex() const { return *cx_; }
  const std::vector<InteractionTerm>& terms() const { return terms_; }
  std::size_t cell_count() const { return cx_->count(ell_); }
  /// Term generated by an oriented cell, or -1.
  int find(const OrientedCell& c) const;
  /// Sum of couplings over all terms.
  double total_coupling() const;

 private:
  void add_pair(std::vector<std::pair<int, int>> support, double coupling, const Cell& label);

  const Complex* cx_ = nullptr;
  int ell_ = 1;
  int k_ = -1;  // charge for charge_k sets, else -1
  std::vector<InteractionTerm> terms_;
};

struct Current {
  std::vector<int> n;  // occupation per term
  long long total() const;
  bool operator==(const Current&) const = default;
};

/// j * gamma as a right-hand side over the ell-cells of the set.
std::vector<long long> source_of(const InteractionSet& set, const Chain& gamma, int j);

/// sum_xi xi[c] n[xi] + source[c] at one cell.
long long constraint_residual(const InteractionSet& set, const Current& n,
                              const std::vector<long long>& source, int cell);
bool satisfies_constraints(const InteractionSet& set, const Current& n,
                           const std::vector<long long>& source);

/// prod beta_xi^n / n!.
double weight(const InteractionSet& set, const Current& n);

struct EnumerationLimits {
  long long max_terms_times_budget = 4096;
  long long max_visits = 400'000'000;
  bool skip_zero_coupling = false;  // treat zero-coupling terms as fixed at 0
  int workers = 1;                  // branches over the first free term
};

/// Calls `visit` for every current with total <= M and zero residuals, in a
/// deterministic (lexicographic by term) order.
void enumerate_currents(const InteractionSet& set, const std::vector<long long>& source, int M,
                        const std::function<void(const Current&)>& visit,
                        const EnumerationLimits& limits = {});

/// Exhaustive enumeration without pruning or forcing (reference only).
void enumerate_currents_bruteforce(const InteractionSet& set, const std::vector<long long>& source,
                                   int M, const std::function<void(const Current&)>& visit);

struct WeightedSum {
  double value = 0.0;
  double tail_bound = 0.0;
  int budget = 0;
  std::uint64_t count = 0;
  std::vector<std::uint64_t> count_by_level;  // currents with total == t
};

/// e^L P[Poisson(L) > M] = sum_{t > M} L^t / t!.
double poisson_tail(double lambda, int M);

WeightedSum partition_sum(const InteractionSet& set, const std::vector<long long>& source, int M,
                          EnumerationLimits limits = {});

/// True when j * boundary(gamma) is not divisible by k at some vertex (for
/// k = 0: nonzero somewhere). Then no current exists for the source j gamma.
bool divisibility_obstruction(const Chain& gamma, int j, int k);

struct ExpectationInterval {
  double lower = 0.0;
  double upper = 0.0;
  bool exact_zero = false;  // certified by divisibility
  WeightedSum numerator;
  WeightedSum denominator;
  double midpoint() const { return 0.5 * (lower + upper); }
  double width() const { return upper - lower; }
};

/// E[cos(j sigma(gamma))] in the charge-k model on `cx` as a rigorous
/// interval from truncated current sums.
ExpectationInterval expectation_via_currents(const Complex& cx, const Chain& gamma, int j, int k,
                                             double beta, double kappa, int M,
                                             const EnumerationLimits& limits = {});

/// Edge-only current n[-e] = j/k on edges traversed forwards by gamma (and
/// n[+e] for backwards edges). Requires k >= 1 and k | j.
Current line_witness(const InteractionSet& set, const Chain& gamma, int j);

/// Plaquette-only current filling a planar axis-aligned rectangle loop with
/// occupation j so that all residuals vanish.
Current surface_witness(const InteractionSet& set, const Chain& gamma, int j);

/// Canonical text form: one line `dim a0,a1,.. d0[,d1] +-1 count` per
/// occupied term, sorted by (cell, sign).
std::string to_text(const InteractionSet& set, const Current& n);
Current from_text(const InteractionSet& set, const std::string& text);

struct BoundReport {
  double a = 0.0;
  bool valid = false;
  double lower_bound = 0.0;  // meaningful only when valid
};

/// a = (1 + 16(m - 1))^2 (e^{j beta / k} - 1) e^{4 kappa}.
double confinement_a(double beta, double kappa, int j, int k, int m);

/// 1 - 2a/(1-a)^2 - Tn a^{Rn} / (1-a) with the asymptotic correction in the
/// exponent dropped; invalid when a >= 1.
BoundReport confinement_lower_bound(double beta, double kappa, int j, int k, int R, int T, int n,
                                    int m);

}  // namespace lhiggs
