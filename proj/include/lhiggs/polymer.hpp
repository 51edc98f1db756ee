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

// Polymer weights of the small-beta / large-kappa expansion of Z[gamma], for
// charge 1 (connected plaquette sets P') and charge k (pairs (P, theta') with
// theta' a Z_k-valued 1-form), together with their Hoelder upper bounds, the
// edge-disjoint plaquette partition that sets the Hoelder exponent, and the
// smallness scan over (beta, kappa).
//
// Conventions: the link measure of an edge is exp(2 kappa cos(k t)) / b_{0,k}
// on t in (-pi/k, pi/k) (normalised), and a plaquette contributes
// exp(2 beta (cos(d theta(p) + alpha_p) - cos alpha_p)) - 1 with
// alpha_p = 2 pi theta'(boundary p) / k. For k = 1 and theta' = 0 this is the
// charge-1 factor exp(2 beta (cos d sigma(p) - 1)) - 1.

#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "lhiggs/lattice.hpp"
#include "lhiggs/quadrature.hpp"

namespace lhiggs {

struct PolymerK1 {
  std::vector<int> plaquettes;     // positive plaquette indices, sorted
  std::vector<int> touched_edges;  // edges in the boundary support, sorted

  /// Validates connectivity and fills touched_edges.
  static PolymerK1 make(const Complex& cx, std::vector<int> plaquettes);
};

struct PolymerKk {
  std::vector<int> plaquettes;          // P
  std::map<int, int> theta_prime;       // edge -> residue in 1..k-1
  int k = 1;
  std::vector<int> support;             // P u (supp d theta')^+, sorted
  std::vector<int> touched_edges;       // boundary support of `support`
  std::map<int, int> plaquette_residue; // p -> theta'(boundary p) mod k, nonzero only

  /// Residues are reduced mod k; zero entries dropped. Throws InvalidInput
  /// when P u (supp d theta')^+ is empty or not connected.
  static PolymerKk make(const Complex& cx, std::vector<int> plaquettes,
                        std::map<int, int> theta_prime, int k);
};

struct IntegratorConfig {
  quad::Options quad;              // tensor quadrature settings
  int max_quad_edges = 6;          // above this, Monte Carlo integration
  int max_plaquettes = 4;
  std::uint64_t mc_samples = 400000;
  std::uint64_t seed = 12345;

  IntegratorConfig() {
    quad.rel_tol = 1e-8;
    quad.abs_tol = 1e-12;
    quad.n0 = 8;
    quad.n_max = 128;
  }
};

struct PolymerValue {
  std::complex<double> value;
  double error = 0.0;  // quadrature estimate, or 1 sigma for Monte Carlo
  bool monte_carlo = false;
  double magnitude() const { return std::abs(value); }
};

/// phi_gamma(P') for charge 1.
PolymerValue phi_k1(const Complex& cx, const PolymerK1& poly, const Chain& gamma, int j,
                    double beta, double kappa, const IntegratorConfig& cfg = {});

/// phi(P, theta') for charge k, including the Z_k prefactor and the
/// theta'-phase on touched gamma edges.
PolymerValue phi_kk(const Complex& cx, const PolymerKk& poly, const Chain& gamma, int j,
                    double beta, double kappa, const IntegratorConfig& cfg = {});

/// (Int |exp(2 beta (cos(phi + alpha) - cos alpha)) - 1|^a_m dmu)^(1/a_m) over
/// the four boundary angles of one plaquette, alpha = 2 pi r / k.
double holder_factor(double beta, double kappa, int k, int a_m, int residue = 0);

/// |b_{0,k} / b_{j,k}|.
double edge_ratio(int j, int k, double kappa);

/// (b0/bj)^touched * holder_factor^|P|.
double holder_k1(double beta, double kappa, int a_m, int j, int touched_count, int plaquettes);

/// Closed-form proxy (b0/bj)^4 (1 - e^{-4 beta}).
double holder_k1_proxy(double beta, double kappa, int j);

/// Z_k prefactor prod_{p in supp d theta'} exp(2 beta (cos alpha_p - 1)).
double zk_prefactor(const PolymerKk& poly, double beta);

/// zk_prefactor * |b0k/bjk|^touched * prod_{p in P} holder_factor(r_p).
double holder_kk(double beta, double kappa, int k, int a_m, int j, int touched_count,
                 double z_k_prefactor, std::span<const int> plaquette_residues);

/// Bound for a concrete polymer (counts touched gamma edges itself).
double holder_kk(const Complex& cx, const PolymerKk& poly, const Chain& gamma, int j,
                 double beta, double kappa, int a_m);

struct PlaquettePartition {
  std::vector<int> color;                  // per plaquette
  std::vector<std::vector<int>> classes;   // plaquettes per colour
  int max_degree = 0;
  int count() const { return static_cast<int>(classes.size()); }
};

/// Greedy colouring in index order; classes share no boundary edge.
PlaquettePartition plaquette_partition(const Complex& cx);

/// True when no two plaquettes of a class share a boundary edge.
bool verify_partition(const Complex& cx, const PlaquettePartition& part);

struct SmallnessRow {
  double beta = 0.0;
  double kappa = 0.0;
  double g1 = 0.0;             // (e^beta - 1) e^{4 kappa}
  double a_conf = 0.0;         // confinement constant a
  double holder_factor = 0.0;  // single-plaquette Hoelder factor
};

struct SmallnessReport {
  int k = 1;
  int j = 1;
  int m = 4;
  int a_m = 1;
  std::vector<SmallnessRow> rows;  // beta-major order
};

double g1(double beta, double kappa);

/// Rows in beta-major order; the Hoelder column is NaN when `with_holder`
/// is false.
SmallnessReport smallness_scan(std::span<const double> betas, std::span<const double> kappas,
                               int k, int j, int m, int a_m, bool with_holder = true);

}  // namespace lhiggs
