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

#include "lhiggs/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <numbers>
#include <thread>

#include "lhiggs/currents.hpp"
#include "lhiggs/errors.hpp"
#include "lhiggs/kernels.hpp"

namespace lhiggs {

namespace {

constexpr double kPi = std::numbers::pi;

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

// Flattened (edge, coefficient) lists for fast evaluation of sigma(chain).
struct CompiledObservable {
  std::vector<std::size_t> offsets;  // members + 1
  std::vector<std::pair<int, long long>> terms;
  int j = 1;
};

CompiledObservable compile(const Complex& cx, const Observable& obs) {
  if (obs.members.empty()) throw InvalidInput("observable needs at least one chain");
  CompiledObservable c;
  c.j = obs.j;
  c.offsets.push_back(0);
  for (const Chain& ch : obs.members) {
    if (!ch.empty() && ch.dim() != 1) throw InvalidInput("Wilson observables need 1-chains");
    for (const auto& [cell, v] : ch.coeffs()) {
      const int e = cx.find(cell);
      if (e < 0) throw InvalidInput("observable chain leaves the complex");
      c.terms.emplace_back(e, v);
    }
    c.offsets.push_back(c.terms.size());
  }
  return c;
}

// Chain angles of every member, shared by observables that differ only in j.
void member_angles(const CompiledObservable& c, const LinkField& sigma, std::vector<double>& out) {
  const std::size_t members = c.offsets.size() - 1;
  out.resize(members);
  for (std::size_t i = 0; i < members; ++i) {
    double s = 0.0;
    for (std::size_t t = c.offsets[i]; t < c.offsets[i + 1]; ++t) {
      s += static_cast<double>(c.terms[t].second) * sigma[c.terms[t].first];
    }
    out[i] = s;
  }
}

bool same_members(const CompiledObservable& a, const CompiledObservable& b) {
  return a.offsets == b.offsets && a.terms == b.terms;
}

double plaquette_angle(const Complex& cx, const LinkField& sigma, int p) {
  double s = 0.0;
  for (const Incidence& inc : cx.plaquette_edges(p)) s += inc.sign * sigma[inc.index];
  return s;
}

}  // namespace

void ModelParams::validate() const {
  if (complex == nullptr) throw InvalidInput("model has no complex");
  if (!std::isfinite(beta) || beta < 0.0) throw InvalidInput("beta must be finite and >= 0");
  if (!std::isfinite(kappa) || kappa < 0.0) throw InvalidInput("kappa must be finite and >= 0");
  if (k < 0) throw InvalidInput("charge k must be >= 0");
}

void SamplerConfig::validate() const {
  if (burn_in < 0 || sweeps <= burn_in) throw InvalidInput("need sweeps > burn_in >= 0");
  if (thin < 1) throw InvalidInput("thin must be >= 1");
  if (bins < 8) throw InvalidInput("bins must be >= 8");
  if (!(proposal_width > 0.0) || proposal_width > kPi) {
    throw InvalidInput("proposal_width must be in (0, pi]");
  }
  if (chains < 1) throw InvalidInput("chains must be >= 1");
  if (samples_per_chain() * chains < bins) throw InvalidInput("insufficient samples for requested bins");
}

double hamiltonian(const LinkField& sigma, const ModelParams& params) {
  params.validate();
  const Complex& cx = *params.complex;
  if (sigma.size() != cx.count(1)) throw InvalidInput("link field size does not match complex");
  double hp = 0.0;
  for (std::size_t p = 0; p < cx.count(2); ++p) hp += std::cos(plaquette_angle(cx, sigma, static_cast<int>(p)));
  double he = 0.0;
  for (double s : sigma) he += std::cos(params.k * s);
  return -2.0 * params.beta * hp - 2.0 * params.kappa * he;
}

double local_delta_energy(const LinkField& sigma, const ModelParams& params, int edge,
                          double proposal) {
  const Complex& cx = *params.complex;
  const double old = sigma[edge];
  // cos(s x + r) = Re(e^{ix} e^{i s r}) for s = +-1, so one staple sum serves
  // both angles.
  std::complex<double> staple{0.0, 0.0};
  for (const Incidence& co : cx.coplaquettes(edge)) {
    const double rest = plaquette_angle(cx, sigma, co.index) - co.sign * old;
    staple += std::polar(1.0, co.sign * rest);
  }
  const std::complex<double> diff = std::polar(1.0, proposal) - std::polar(1.0, old);
  return -2.0 * params.beta * (diff * staple).real() -
         2.0 * params.kappa * (std::cos(params.k * proposal) - std::cos(params.k * old));
}

double metropolis_acceptance(double delta_energy) {
  return delta_energy <= 0.0 ? 1.0 : std::exp(-delta_energy);
}

std::size_t metropolis_sweep(LinkField& sigma, const ModelParams& params, double width,
                             std::mt19937_64& rng) {
  std::uniform_real_distribution<double> step(-width, width);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Complex& cx = *params.complex;
  // Unit phases per link; a plaquette phase is then a product, no trig.
  std::vector<std::complex<double>> u(sigma.size());
  for (std::size_t e = 0; e < sigma.size(); ++e) u[e] = std::polar(1.0, sigma[e]);
  auto plaquette_phase = [&](int p) {
    std::complex<double> z{1.0, 0.0};
    for (const Incidence& inc : cx.plaquette_edges(p)) z *= inc.sign > 0 ? u[inc.index] : std::conj(u[inc.index]);
    return z;
  };
  std::size_t accepted = 0;
  for (std::size_t e = 0; e < sigma.size(); ++e) {
    const double prop = wrap_angle(sigma[e] + step(rng));
    std::complex<double> staple{0.0, 0.0};
    if (params.beta != 0.0) {
      for (const Incidence& co : cx.coplaquettes(static_cast<int>(e))) {
        const std::complex<double> up = plaquette_phase(co.index);
        staple += co.sign > 0 ? up : std::conj(up);
      }
      staple *= std::conj(u[e]);
    }
    const std::complex<double> up = std::polar(1.0, prop);
    const double dE = -2.0 * params.beta * ((up - u[e]) * staple).real() -
                      2.0 * params.kappa * (std::cos(params.k * prop) - std::cos(params.k * sigma[e]));
    // Always draw the uniform so the stream does not depend on dE's sign.
    const double r = unit(rng);
    if (r < metropolis_acceptance(dE)) {
      sigma[e] = prop;
      u[e] = up;
      ++accepted;
    }
  }
  return accepted;
}

void gauge_randomize(LinkField& sigma, const ModelParams& params, std::mt19937_64& rng) {
  const int k = params.k;
  if (k <= 1) return;
  const Complex& cx = *params.complex;
  std::uniform_int_distribution<int> pick(0, k - 1);
  const double unit = 2.0 * kPi / k;
  for (std::size_t v = 0; v < cx.count(0); ++v) {
    const int q = pick(rng);
    if (q == 0) continue;
    for (const Incidence& inc : cx.coedges(static_cast<int>(v))) {
      sigma[inc.index] = wrap_angle(sigma[inc.index] + inc.sign * q * unit);
    }
  }
}

Sampler::Sampler(const ModelParams& params, const SamplerConfig& cfg, std::uint64_t seed)
    : params_(params), cfg_(cfg), rng_(make_rng(seed, 0)), width_(cfg.proposal_width) {
  params_.validate();
  sigma_.assign(params_.complex->count(1), 0.0);
  if (cfg_.hot_start) {
    std::uniform_real_distribution<double> u(-kPi, kPi);
    for (double& s : sigma_) s = u(rng_);
  }
}

std::size_t Sampler::sweep() {
  const std::size_t acc = metropolis_sweep(sigma_, params_, width_, rng_);
  gauge_randomize(sigma_, params_, rng_);
  accepted_ += acc;
  proposed_ += sigma_.size();
  return acc;
}

void Sampler::burn_in() {
  constexpr long kWindow = 20;
  std::size_t acc = 0, prop = 0;
  for (long s = 0; s < cfg_.burn_in; ++s) {
    acc += sweep();
    prop += sigma_.size();
    if (cfg_.tune && (s + 1) % kWindow == 0 && prop > 0) {
      const double rate = static_cast<double>(acc) / static_cast<double>(prop);
      if (rate > 0.6) width_ = std::min(kPi, width_ * 1.25);
      if (rate < 0.4) width_ = std::max(1e-3, width_ * 0.8);
      acc = prop = 0;
    }
  }
  accepted_ = proposed_ = 0;
}

double Sampler::acceptance() const {
  return proposed_ == 0 ? 0.0 : static_cast<double>(accepted_) / static_cast<double>(proposed_);
}

SampleSeries sample_observables(const ModelParams& params, const SamplerConfig& cfg,
                                const std::vector<Observable>& observables) {
  params.validate();
  cfg.validate();
  const Complex& cx = *params.complex;
  std::vector<CompiledObservable> comp;
  for (const Observable& o : observables) comp.push_back(compile(cx, o));
  // group[o] is the first observable with the same member chains.
  std::vector<std::size_t> group(comp.size());
  for (std::size_t o = 0; o < comp.size(); ++o) {
    group[o] = o;
    for (std::size_t q = 0; q < o; ++q) {
      if (group[q] == q && same_members(comp[q], comp[o])) {
        group[o] = q;
        break;
      }
    }
  }

  const long per_chain = cfg.samples_per_chain();
  struct ChainOut {
    std::vector<std::vector<double>> re, im;
    double acceptance = 0.0;
    double width = 0.0;
  };
  std::vector<ChainOut> outs(static_cast<std::size_t>(cfg.chains));

  auto run_chain = [&](int c) {
    Sampler s(params, cfg, cfg.seed + static_cast<std::uint64_t>(c) * 0x9E3779B97F4A7C15ull);
    s.burn_in();
    ChainOut& out = outs[c];
    out.re.assign(comp.size(), std::vector<double>(per_chain));
    out.im.assign(comp.size(), std::vector<double>(per_chain));
    std::vector<std::vector<double>> angles(comp.size());
    for (long i = 0; i < per_chain; ++i) {
      for (int t = 0; t < cfg.thin; ++t) s.sweep();
      for (std::size_t o = 0; o < comp.size(); ++o) {
        if (group[o] == o) member_angles(comp[o], s.field(), angles[o]);
        const std::vector<double>& a = angles[group[o]];
        const double inv = 1.0 / static_cast<double>(a.size());
        out.re[o][i] = kernels::sum_cos(a, comp[o].j) * inv;
        out.im[o][i] = kernels::sum_sin(a, comp[o].j) * inv;
      }
    }
    out.acceptance = s.acceptance();
    out.width = s.width();
  };

  const int workers = std::clamp(cfg.workers, 1, cfg.chains);
  if (workers == 1) {
    for (int c = 0; c < cfg.chains; ++c) run_chain(c);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int c = w; c < cfg.chains; c += workers) run_chain(c);
        } catch (...) {
          errs[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errs) {
      if (e) std::rethrow_exception(e);
    }
  }

  SampleSeries series;
  series.re.resize(comp.size());
  series.im.resize(comp.size());
  for (const ChainOut& out : outs) {
    for (std::size_t o = 0; o < comp.size(); ++o) {
      series.re[o].insert(series.re[o].end(), out.re[o].begin(), out.re[o].end());
      series.im[o].insert(series.im[o].end(), out.im[o].begin(), out.im[o].end());
    }
    series.acceptance += out.acceptance / cfg.chains;
    series.width += out.width / cfg.chains;
  }
  return series;
}

WilsonEstimate estimate_wilson(const Chain& gamma, int j, const ModelParams& params,
                               const SamplerConfig& cfg) {
  if (j < 1) throw InvalidInput("Wilson charge j must be >= 1");
  const SampleSeries s = sample_observables(params, cfg, {Observable{{gamma}, j}});
  return {binned_estimate(s.re[0], cfg.bins), binned_estimate(s.im[0], cfg.bins)};
}

std::vector<Chain> rectangle_family(const Complex& cx, int w, int h) {
  if (w < 1 || h < 1) throw InvalidInput("rectangle sides must be >= 1");
  std::vector<Chain> out;
  const int m = cx.dim();
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      for (const Cell& v : cx.cells(0)) {
        Coord far = v.anchor;
        far[a] += w;
        far[b] += h;
        if (!cx.contains(Cell::vertex(far))) continue;
        out.push_back(rectangle_loop(v.anchor, a, b, w, h));
      }
    }
  }
  if (out.empty()) throw InvalidInput("rectangle does not fit the complex");
  return out;
}

std::string to_string(RatioStatus s) {
  switch (s) {
    case RatioStatus::ok:
      return "ok";
    case RatioStatus::zero_numerator:
      return "identically-zero-numerator";
    case RatioStatus::undefined:
      return "undefined";
  }
  return "?";
}

MfRatioEstimate estimate_mf_ratio(int R, int T, int n, int j, const ModelParams& params,
                                  const SamplerConfig& cfg) {
  params.validate();
  if (j < 1) throw InvalidInput("Wilson charge j must be >= 1");
  const MfGeometry g = mf_geometry(*params.complex, R, T, n);
  const Chain loop = g.gamma.chain + g.gamma_prime.chain;
  const SampleSeries s = sample_observables(
      params, cfg, {Observable{{g.gamma.chain}, j}, Observable{{g.gamma_prime.chain}, j}, Observable{{loop}, j}});

  MfRatioEstimate r;
  r.n = n;
  r.Rn = g.Rn;
  r.Tn = g.Tn;
  const std::vector<std::span<const double>> cols{s.re[0], s.re[1], s.re[2]};
  r.num = jackknife(cols, cfg.bins, [](std::span<const double> a) { return a[0] * a[1]; });
  r.den = binned_estimate(s.re[2], cfg.bins);
  if (divisibility_obstruction(g.gamma.chain, j, params.k)) {
    r.status = RatioStatus::zero_numerator;
    r.ratio = r.ratio_err = std::nan("");
    return r;
  }
  if (std::abs(r.den.mean) < 3.0 * r.den.std_error) {
    r.status = RatioStatus::undefined;
    r.ratio = r.ratio_err = std::nan("");
    return r;
  }
  const Estimate q = jackknife(cols, cfg.bins, [](std::span<const double> a) { return a[0] * a[1] / a[2]; });
  r.ratio = q.mean;
  r.ratio_err = q.std_error;
  return r;
}

std::vector<int> bulk_edges(const Complex& cx) {
  const int N = cx.radius();
  const int margin = std::min(2, N - 1);
  std::vector<int> out;
  for (std::size_t e = 0; e < cx.count(1); ++e) {
    bool inside = true;
    for (const Coord& v : cx.cells(1)[e].vertices()) {
      for (int i = 0; i < cx.dim(); ++i) {
        if (std::abs(v[i]) > N - margin) inside = false;
      }
    }
    if (inside) out.push_back(static_cast<int>(e));
  }
  return out;
}

GhsBound ghs_product_bound(const Chain& gamma, int j, const ModelParams& params,
                           const SamplerConfig& cfg) {
  params.validate();
  if (j < 1) throw InvalidInput("Wilson charge j must be >= 1");
  if (params.k == 0 || j % params.k != 0) throw InvalidInput("GHS product bound needs k | j");
  const Complex& cx = *params.complex;
  std::vector<int> bulk = bulk_edges(cx);
  if (bulk.empty()) throw InvalidInput("complex has no bulk edges");
  Observable obs;
  obs.j = j;
  for (int e : bulk) {
    Chain c(1);
    c.add(cx.cells(1)[e], 1);
    obs.members.push_back(std::move(c));
  }
  const SampleSeries s = sample_observables(params, cfg, {obs});
  GhsBound b;
  b.single_edge = binned_estimate(s.re[0], cfg.bins);
  b.length = static_cast<int>(gamma.mass());
  const double w = b.single_edge.mean;
  if (std::abs(w) < 3.0 * b.single_edge.std_error) {
    throw NotConverged("single-edge estimate consistent with 0; GHS bound undefined");
  }
  b.value = std::pow(w, b.length);
  b.error = b.length == 0 ? 0.0 : b.length * std::pow(std::abs(w), b.length - 1) * b.single_edge.std_error;
  return b;
}

}  // namespace lhiggs
