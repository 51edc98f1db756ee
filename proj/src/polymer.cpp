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

#include "lhiggs/polymer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <set>
#include <tuple>

#include "lhiggs/bessel.hpp"
#include "lhiggs/currents.hpp"
#include "lhiggs/errors.hpp"

namespace lhiggs {
namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

std::vector<int> boundary_edges(const Complex& cx, std::span<const int> plaqs) {
  std::set<int> edges;
  for (int p : plaqs) {
    for (const Incidence& inc : cx.plaquette_edges(p)) edges.insert(inc.index);
  }
  return {edges.begin(), edges.end()};
}

void check_couplings(double beta, double kappa) {
  if (!(beta >= 0.0) || !(kappa >= 0.0) || !std::isfinite(beta) || !std::isfinite(kappa)) {
    throw InvalidInput("couplings must be finite and >= 0");
  }
}

// Everything needed to evaluate one polymer integral, independent of the
// integrator: angle ranges, per-edge phases, plaquette terms.
struct PolymerIntegral {
  int k = 1;
  double kappa = 0.0;
  std::vector<int> phase;  // per variable
  struct Plaq {
    std::array<std::pair<int, int>, 4> coefs;  // (variable, sign)
    double alpha = 0.0;
  };
  std::vector<Plaq> plaqs;
  double two_beta = 0.0;
};

// Normalised integral via tensor quadrature.
PolymerValue integrate_quad(const PolymerIntegral& pi, const IntegratorConfig& cfg) {
  quad::Problem prob;
  for (int q : pi.phase) {
    quad::Variable v;
    v.lo = -kPi / pi.k;
    v.hi = kPi / pi.k;
    v.density_a = 2.0 * pi.kappa;
    v.density_k = pi.k;
    v.phase = q;
    prob.vars.push_back(v);
  }
  for (const auto& pl : pi.plaqs) {
    quad::Term t;
    t.coefs.assign(pl.coefs.begin(), pl.coefs.end());
    t.a = pi.two_beta;
    t.alpha = pl.alpha;
    t.offset = std::cos(pl.alpha);
    t.subtract = 1.0;
    prob.terms.push_back(std::move(t));
  }
  const quad::Result r = quad::integrate(prob, cfg.quad);
  const double b0 = bessel_i(0, 2.0 * pi.kappa).value;
  const double norm = std::pow(b0, static_cast<double>(pi.phase.size()));
  return {r.value / norm, r.error / norm, false};
}

// Draws from exp(2 kappa cos(k t)) on (-pi/k, pi/k) by rejection against
// the uniform proposal.
class LinkSampler {
 public:
  LinkSampler(int k, double kappa, std::uint64_t seed) : k_(k), kappa_(kappa), rng_(seed) {}
  double operator()() {
    std::uniform_real_distribution<double> u(-kPi / k_, kPi / k_);
    std::uniform_real_distribution<double> acc(0.0, 1.0);
    for (;;) {
      const double t = u(rng_);
      if (acc(rng_) <= std::exp(2.0 * kappa_ * (std::cos(k_ * t) - 1.0))) return t;
    }
  }

 private:
  int k_;
  double kappa_;
  std::mt19937_64 rng_;
};

PolymerValue integrate_mc(const PolymerIntegral& pi, const IntegratorConfig& cfg) {
  if (cfg.mc_samples < 2) throw InvalidInput("Monte Carlo integration needs >= 2 samples");
  LinkSampler draw(pi.k, pi.kappa, cfg.seed);
  std::vector<double> theta(pi.phase.size());
  double sr = 0.0, si = 0.0, srr = 0.0, sii = 0.0;
  for (std::uint64_t s = 0; s < cfg.mc_samples; ++s) {
    double psi = 0.0;
    for (std::size_t v = 0; v < theta.size(); ++v) {
      theta[v] = draw();
      psi += pi.phase[v] * theta[v];
    }
    double f = 1.0;
    for (const auto& pl : pi.plaqs) {
      double phi = 0.0;
      for (const auto& [v, c] : pl.coefs) phi += c * theta[v];
      f *= std::exp(pi.two_beta * (std::cos(phi + pl.alpha) - std::cos(pl.alpha))) - 1.0;
    }
    const double re = f * std::cos(psi);
    const double im = f * std::sin(psi);
    sr += re;
    si += im;
    srr += re * re;
    sii += im * im;
  }
  const double n = static_cast<double>(cfg.mc_samples);
  const double mr = sr / n, mi = si / n;
  const double vr = std::max(0.0, srr / n - mr * mr);
  const double vi = std::max(0.0, sii / n - mi * mi);
  return {cplx(mr, mi), std::sqrt((vr + vi) / (n - 1.0)), true};
}

PolymerValue integrate(const PolymerIntegral& pi, const IntegratorConfig& cfg) {
  if (static_cast<int>(pi.phase.size()) <= cfg.max_quad_edges) return integrate_quad(pi, cfg);
  return integrate_mc(pi, cfg);
}

struct HolderKey {
  double beta, kappa;
  int k, a_m, r;
  auto operator<=>(const HolderKey&) const = default;
};

}  // namespace

// --- polymers --------------------------------------------------------------

PolymerK1 PolymerK1::make(const Complex& cx, std::vector<int> plaquettes) {
  std::sort(plaquettes.begin(), plaquettes.end());
  plaquettes.erase(std::unique(plaquettes.begin(), plaquettes.end()), plaquettes.end());
  if (plaquettes.empty()) throw InvalidInput("polymer needs at least one plaquette");
  if (adjacency_components(cx, 2, plaquettes).size() != 1) {
    throw InvalidInput("charge-1 polymer must be connected");
  }
  PolymerK1 poly;
  poly.touched_edges = boundary_edges(cx, plaquettes);
  poly.plaquettes = std::move(plaquettes);
  return poly;
}

PolymerKk PolymerKk::make(const Complex& cx, std::vector<int> plaquettes,
                          std::map<int, int> theta_prime, int k) {
  if (k < 1) throw InvalidInput("charge k must be >= 1");
  PolymerKk poly;
  poly.k = k;
  for (auto& [e, r] : theta_prime) {
    if (e < 0 || static_cast<std::size_t>(e) >= cx.count(1)) throw InvalidInput("theta' edge outside complex");
    const int rr = ((r % k) + k) % k;
    if (rr != 0) poly.theta_prime[e] = rr;
  }
  std::set<int> touched_plaqs;
  for (const auto& [e, r] : poly.theta_prime) {
    for (const Incidence& inc : cx.coplaquettes(e)) touched_plaqs.insert(inc.index);
  }
  std::set<int> support(plaquettes.begin(), plaquettes.end());
  for (int p : touched_plaqs) {
    int s = 0;
    for (const Incidence& inc : cx.plaquette_edges(p)) {
      const auto it = poly.theta_prime.find(inc.index);
      if (it != poly.theta_prime.end()) s += inc.sign * it->second;
    }
    s = ((s % k) + k) % k;
    if (s != 0) {
      poly.plaquette_residue[p] = s;
      support.insert(p);
    }
  }
  std::sort(plaquettes.begin(), plaquettes.end());
  plaquettes.erase(std::unique(plaquettes.begin(), plaquettes.end()), plaquettes.end());
  for (int p : plaquettes) {
    if (p < 0 || static_cast<std::size_t>(p) >= cx.count(2)) throw InvalidInput("plaquette outside complex");
  }
  poly.plaquettes = std::move(plaquettes);
  poly.support.assign(support.begin(), support.end());
  if (poly.support.empty()) throw InvalidInput("charge-k polymer has empty support");
  if (adjacency_components(cx, 2, poly.support).size() != 1) {
    throw InvalidInput("charge-k polymer (P, theta') must be connected");
  }
  poly.touched_edges = boundary_edges(cx, poly.support);
  return poly;
}

double edge_ratio(int j, int k, double kappa) {
  const double b0 = bessel_i(0, 2.0 * kappa).value;
  const double bj = (k >= 1 && j % k == 0) ? bessel_i(j / k, 2.0 * kappa).value
                                           : b_charge(j, k, kappa).value;
  if (bj == 0.0) throw InvalidInput("b_{j,k} vanishes; edge ratio undefined");
  return std::abs(b0 / bj);
}

PolymerValue phi_k1(const Complex& cx, const PolymerK1& poly, const Chain& gamma, int j,
                    double beta, double kappa, const IntegratorConfig& cfg) {
  check_couplings(beta, kappa);
  if (j < 1) throw InvalidInput("phi_k1: j must be >= 1");
  if (static_cast<int>(poly.plaquettes.size()) > cfg.max_plaquettes) {
    throw ResourceGuard("polymer has more plaquettes than the configured limit");
  }
  if (beta == 0.0) return {0.0, 0.0, false};
  PolymerIntegral pi;
  pi.k = 1;
  pi.kappa = kappa;
  pi.two_beta = 2.0 * beta;
  std::map<int, int> var_of;
  int gamma_touched = 0;
  for (int e : poly.touched_edges) {
    var_of[e] = static_cast<int>(pi.phase.size());
    const long long g = gamma.empty() ? 0 : gamma[cx.cells(1)[e]];
    if (g != 0) ++gamma_touched;
    pi.phase.push_back(static_cast<int>(j * g));
  }
  for (int p : poly.plaquettes) {
    PolymerIntegral::Plaq pl;
    const auto& pe = cx.plaquette_edges(p);
    for (int i = 0; i < 4; ++i) pl.coefs[i] = {var_of.at(pe[i].index), pe[i].sign};
    pi.plaqs.push_back(pl);
  }
  PolymerValue v = integrate(pi, cfg);
  const double pref = std::pow(edge_ratio(j, 1, kappa), gamma_touched);
  v.value *= pref;
  v.error *= pref;
  return v;
}

double zk_prefactor(const PolymerKk& poly, double beta) {
  double f = 1.0;
  for (const auto& [p, r] : poly.plaquette_residue) {
    f *= std::exp(2.0 * beta * (std::cos(2.0 * kPi * r / poly.k) - 1.0));
  }
  return f;
}

PolymerValue phi_kk(const Complex& cx, const PolymerKk& poly, const Chain& gamma, int j,
                    double beta, double kappa, const IntegratorConfig& cfg) {
  check_couplings(beta, kappa);
  if (j < 0) throw InvalidInput("phi_kk: j must be >= 0");
  if (static_cast<int>(poly.plaquettes.size()) > cfg.max_plaquettes) {
    throw ResourceGuard("polymer has more plaquettes than the configured limit");
  }
  const int k = poly.k;
  if (beta == 0.0 && !poly.plaquettes.empty()) return {0.0, 0.0, false};
  PolymerIntegral pi;
  pi.k = k;
  pi.kappa = kappa;
  pi.two_beta = 2.0 * beta;
  std::map<int, int> var_of;
  int gamma_touched = 0;
  double zk_phase = 0.0;
  for (int e : poly.touched_edges) {
    var_of[e] = static_cast<int>(pi.phase.size());
    const long long g = gamma.empty() ? 0 : gamma[cx.cells(1)[e]];
    if (g != 0) {
      ++gamma_touched;
      const auto it = poly.theta_prime.find(e);
      if (it != poly.theta_prime.end()) zk_phase += j * g * 2.0 * kPi * it->second / k;
    }
    pi.phase.push_back(static_cast<int>(j * g));
  }
  for (int p : poly.plaquettes) {
    PolymerIntegral::Plaq pl;
    const auto& pe = cx.plaquette_edges(p);
    for (int i = 0; i < 4; ++i) pl.coefs[i] = {var_of.at(pe[i].index), pe[i].sign};
    const auto it = poly.plaquette_residue.find(p);
    pl.alpha = it == poly.plaquette_residue.end() ? 0.0 : 2.0 * kPi * it->second / k;
    pi.plaqs.push_back(pl);
  }
  PolymerValue v = integrate(pi, cfg);
  const double pref = std::pow(edge_ratio(j, k, kappa), gamma_touched) * zk_prefactor(poly, beta);
  v.value *= pref * std::polar(1.0, zk_phase);
  v.error *= pref;
  return v;
}

// --- Hoelder bounds ---------------------------------------------------------

double holder_factor(double beta, double kappa, int k, int a_m, int residue) {
  check_couplings(beta, kappa);
  if (a_m < 1) throw InvalidInput("a_m must be >= 1");
  if (k < 1) throw InvalidInput("charge k must be >= 1");
  if (beta == 0.0) return 0.0;
  const int r = ((residue % k) + k) % k;
  static std::mutex mu;
  static std::map<HolderKey, double> cache;
  const HolderKey key{beta, kappa, k, a_m, r};
  {
    std::lock_guard<std::mutex> lock(mu);
    if (const auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const double alpha = 2.0 * kPi * r / k;
  quad::Problem prob;
  for (int i = 0; i < 4; ++i) {
    quad::Variable v;
    v.lo = -kPi / k;
    v.hi = kPi / k;
    v.density_a = 2.0 * kappa;
    v.density_k = k;
    prob.vars.push_back(v);
  }
  quad::Term t;
  t.coefs = {{0, 1}, {1, 1}, {2, -1}, {3, -1}};
  t.a = 2.0 * beta;
  t.alpha = alpha;
  t.offset = std::cos(alpha);
  t.subtract = 1.0;
  t.power = a_m;
  t.absolute = true;
  prob.terms.push_back(t);
  quad::Options opt;
  opt.n0 = 16;
  opt.n_max = 256;
  opt.rel_tol = 1e-7;
  opt.abs_tol = 1e-14;
  const quad::Result res = quad::integrate(prob, opt);
  const double b0 = bessel_i(0, 2.0 * kappa).value;
  const double integral = res.value.real() / std::pow(b0, 4.0);
  // Round the quadrature error up so the factor stays an upper bound.
  const double val = std::pow(std::max(0.0, integral + res.error / std::pow(b0, 4.0)), 1.0 / a_m);
  std::lock_guard<std::mutex> lock(mu);
  cache[key] = val;
  return val;
}

double holder_k1(double beta, double kappa, int a_m, int j, int touched_count, int plaquettes) {
  if (touched_count < 0 || plaquettes < 0) throw InvalidInput("counts must be >= 0");
  return std::pow(edge_ratio(j, 1, kappa), touched_count) *
         std::pow(holder_factor(beta, kappa, 1, a_m, 0), plaquettes);
}

double holder_k1_proxy(double beta, double kappa, int j) {
  return std::pow(edge_ratio(j, 1, kappa), 4) * (1.0 - std::exp(-4.0 * beta));
}

double holder_kk(double beta, double kappa, int k, int a_m, int j, int touched_count,
                 double z_k_prefactor, std::span<const int> plaquette_residues) {
  if (touched_count < 0) throw InvalidInput("touched count must be >= 0");
  double bound = z_k_prefactor * std::pow(edge_ratio(j, k, kappa), touched_count);
  for (int r : plaquette_residues) bound *= holder_factor(beta, kappa, k, a_m, r);
  return bound;
}

double holder_kk(const Complex& cx, const PolymerKk& poly, const Chain& gamma, int j,
                 double beta, double kappa, int a_m) {
  int touched = 0;
  for (int e : poly.touched_edges) {
    if (!gamma.empty() && gamma[cx.cells(1)[e]] != 0) ++touched;
  }
  std::vector<int> residues;
  for (int p : poly.plaquettes) {
    const auto it = poly.plaquette_residue.find(p);
    residues.push_back(it == poly.plaquette_residue.end() ? 0 : it->second);
  }
  return holder_kk(beta, kappa, poly.k, a_m, j, touched, zk_prefactor(poly, beta), residues);
}

// --- partition -------------------------------------------------------------

PlaquettePartition plaquette_partition(const Complex& cx) {
  PlaquettePartition part;
  const std::size_t np = cx.count(2);
  part.color.assign(np, -1);
  std::vector<int> used;
  for (std::size_t p = 0; p < np; ++p) {
    used.clear();
    int degree = 0;
    std::set<int> nbrs;
    for (const Incidence& e : cx.plaquette_edges(static_cast<int>(p))) {
      for (const Incidence& q : cx.coplaquettes(e.index)) {
        if (q.index != static_cast<int>(p)) nbrs.insert(q.index);
      }
    }
    degree = static_cast<int>(nbrs.size());
    part.max_degree = std::max(part.max_degree, degree);
    for (int q : nbrs) {
      if (part.color[q] >= 0) used.push_back(part.color[q]);
    }
    std::sort(used.begin(), used.end());
    int c = 0;
    for (int u : used) {
      if (u == c) ++c;
      else if (u > c) break;
    }
    part.color[p] = c;
    if (static_cast<std::size_t>(c) >= part.classes.size()) part.classes.resize(c + 1);
    part.classes[c].push_back(static_cast<int>(p));
  }
  return part;
}

bool verify_partition(const Complex& cx, const PlaquettePartition& part) {
  for (const auto& cls : part.classes) {
    std::set<int> edges;
    for (int p : cls) {
      for (const Incidence& e : cx.plaquette_edges(p)) {
        if (!edges.insert(e.index).second) return false;
      }
    }
  }
  std::size_t total = 0;
  for (const auto& cls : part.classes) total += cls.size();
  return total == cx.count(2);
}

// --- smallness scan ---------------------------------------------------------

double g1(double beta, double kappa) { return std::expm1(beta) * std::exp(4.0 * kappa); }

SmallnessReport smallness_scan(std::span<const double> betas, std::span<const double> kappas,
                               int k, int j, int m, int a_m, bool with_holder) {
  if (k < 1) throw InvalidInput("smallness scan needs k >= 1");
  if (j < 1) throw InvalidInput("smallness scan needs j >= 1");
  SmallnessReport rep;
  rep.k = k;
  rep.j = j;
  rep.m = m;
  rep.a_m = a_m;
  for (double b : betas) {
    for (double kap : kappas) {
      check_couplings(b, kap);
      SmallnessRow row;
      row.beta = b;
      row.kappa = kap;
      row.g1 = g1(b, kap);
      row.a_conf = j % k == 0 ? confinement_a(b, kap, j, k, m)
                              : std::numeric_limits<double>::quiet_NaN();
      row.holder_factor = with_holder ? holder_factor(b, kap, k, a_m, 0)
                                      : std::numeric_limits<double>::quiet_NaN();
      rep.rows.push_back(row);
    }
  }
  return rep;
}

}  // namespace lhiggs
