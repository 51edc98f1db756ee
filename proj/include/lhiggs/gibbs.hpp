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

// Metropolis sampling of
//
//   mu(sigma) ~ exp(2 beta sum_{p+} cos d sigma(p) + 2 kappa sum_{e+} cos k sigma(e))
//
// on a cubical complex, plus Wilson-line estimators built on it. The factor 2
// folds the two orientations of every cell into one cosine, so (beta, kappa)
// here are the couplings that multiply each oriented cell.

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lhiggs/lattice.hpp"
#include "lhiggs/stats.hpp"

namespace lhiggs {

struct ModelParams {
  double beta = 0.0;
  double kappa = 0.0;
  int k = 1;
  const Complex* complex = nullptr;

  void validate() const;
};

/// Angle per positive edge (indexed like Complex::cells(1)), in [-pi, pi).
using LinkField = std::vector<double>;

struct SamplerConfig {
  long sweeps = 2000;  // total, including burn-in
  long burn_in = 200;
  int thin = 1;
  std::uint64_t seed = 1;
  double proposal_width = 1.0;
  int bins = 16;
  bool tune = true;       // adapt the width during burn-in
  bool hot_start = true;  // uniform initial angles
  int chains = 1;         // independent chains, concatenated in seed order
  int workers = 1;

  void validate() const;
  long samples_per_chain() const { return (sweeps - burn_in) / thin; }
};

double hamiltonian(const LinkField& sigma, const ModelParams& params);

/// Energy change when sigma(e) is replaced by `proposal`, using only the
/// coplaquettes of e.
double local_delta_energy(const LinkField& sigma, const ModelParams& params, int edge,
                          double proposal);

/// min(1, exp(-dE)).
double metropolis_acceptance(double delta_energy);

class Sampler {
 public:
  Sampler(const ModelParams& params, const SamplerConfig& cfg, std::uint64_t seed);

  /// One sweep over all edges in index order; returns accepted moves.
  std::size_t sweep();
  /// Burn-in sweeps, adapting the proposal width towards 40-60% acceptance.
  void burn_in();

  const LinkField& field() const { return sigma_; }
  LinkField& field() { return sigma_; }
  double width() const { return width_; }
  double acceptance() const;

 private:
  ModelParams params_;
  SamplerConfig cfg_;
  std::mt19937_64 rng_;
  LinkField sigma_;
  double width_;
  std::uint64_t proposed_ = 0;
  std::uint64_t accepted_ = 0;
};

/// One full sweep of single-link Metropolis updates on `sigma`.
std::size_t metropolis_sweep(LinkField& sigma, const ModelParams& params, double width,
                             std::mt19937_64& rng);

/// Shifts the links at every vertex by 2 pi q / k with q uniform in Z_k.
/// H is invariant, so the move is always accepted; without it single-link
/// updates rarely cross between the k minima of the Higgs term.
void gauge_randomize(LinkField& sigma, const ModelParams& params, std::mt19937_64& rng);

/// A family of chains averaged per sample (e.g. all translates of a loop),
/// measured as cos and sin of j sigma(chain).
struct Observable {
  std::vector<Chain> members;
  int j = 1;
};

struct SampleSeries {
  std::vector<std::vector<double>> re;  // per observable
  std::vector<std::vector<double>> im;
  double acceptance = 0.0;
  double width = 0.0;
};

/// Runs cfg.chains independent chains and concatenates their measurements.
SampleSeries sample_observables(const ModelParams& params, const SamplerConfig& cfg,
                                const std::vector<Observable>& observables);

struct WilsonEstimate {
  Estimate re;
  Estimate im;
};

WilsonEstimate estimate_wilson(const Chain& gamma, int j, const ModelParams& params,
                               const SamplerConfig& cfg);

/// All axis-aligned w x h rectangle loops in every plane that fit the complex.
std::vector<Chain> rectangle_family(const Complex& cx, int w, int h);

enum class RatioStatus { ok, zero_numerator, undefined };
std::string to_string(RatioStatus s);

struct MfRatioEstimate {
  int n = 0;
  int Rn = 0;
  int Tn = 0;
  Estimate num;  // W(j gamma) W(j gamma')
  Estimate den;  // W(j (gamma + gamma'))
  double ratio = 0.0;
  double ratio_err = 0.0;
  RatioStatus status = RatioStatus::ok;
};

/// Jackknife ratio of jointly sampled estimators. zero_numerator when k does
/// not divide j (the open-path expectations vanish identically), undefined when
/// the denominator is below 3 standard errors.
MfRatioEstimate estimate_mf_ratio(int R, int T, int n, int j, const ModelParams& params,
                                  const SamplerConfig& cfg);

struct GhsBound {
  Estimate single_edge;
  int length = 0;
  double value = 0.0;
  double error = 0.0;
};

/// Edges whose vertices all lie at distance >= margin from the box faces,
/// with margin = min(2, N - 1).
std::vector<int> bulk_edges(const Complex& cx);

/// prod_{e in gamma} <W_{je}> from one translation-averaged single-edge estimate.
GhsBound ghs_product_bound(const Chain& gamma, int j, const ModelParams& params,
                           const SamplerConfig& cfg);

}  // namespace lhiggs
