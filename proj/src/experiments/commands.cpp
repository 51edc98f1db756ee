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

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "lhiggs/currents.hpp"
#include "lhiggs/errors.hpp"
#include "lhiggs/experiments.hpp"
#include "lhiggs/polymer.hpp"

namespace lhiggs::exp {

namespace {

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void warn_low_dimension(const CommandContext& ctx) {
  if (ctx.cfg.m < 4) {
    ctx.out() << "warning: m = " << ctx.cfg.m
              << " < 4; confinement and Higgs-phase statements are only claimed for m >= 4\n";
  }
}

std::vector<double> grid(double lo, double hi, int steps) {
  std::vector<double> g;
  for (int i = 0; i < steps; ++i) g.push_back(steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1));
  return g;
}

struct NamedComplex {
  Complex cx;
  Chain gamma{1};
};

NamedComplex named_complex(const RunConfig& cfg) {
  const Coord o{};
  NamedComplex nc;
  if (cfg.complex == "edge") {
    const Cell e = Cell::edge(o, 0);
    nc.cx = Complex::closure(std::max(cfg.m, 1), std::span<const Cell>(&e, 1));
    nc.gamma.add(e, 1);
  } else if (cfg.complex == "plaquette" || cfg.complex == "pendant") {
    if (cfg.m < 2) throw InvalidInput("plaquette complexes need m >= 2");
    std::vector<Cell> cells{Cell::plaquette(o, 0, 1)};
    Coord x1{};
    x1[0] = 1;
    if (cfg.complex == "pendant") cells.push_back(Cell::edge(x1, 0));
    nc.cx = Complex::closure(cfg.m, cells);
    if (cfg.complex == "plaquette") {
      nc.gamma = rectangle_loop(o, 0, 1, 1, 1);
    } else {
      nc.gamma.add(Cell::edge(o, 0), 1);
      nc.gamma.add(Cell::edge(x1, 0), 1);
    }
  } else {
    if (cfg.m < 2) throw InvalidInput("box complex needs m >= 2");
    nc.cx = Complex::box(cfg.m, cfg.N);
    nc.gamma = rectangle_loop(o, 0, 1, 1, 1);
  }
  return nc;
}

EnumerationLimits limits_of(const RunConfig& cfg) {
  EnumerationLimits lim;
  lim.max_terms_times_budget = cfg.max_terms_times_budget;
  lim.max_visits = cfg.max_visits;
  lim.workers = worker_count();
  return lim;
}

}  // namespace

std::ostream& CommandContext::out() const { return log ? *log : std::cout; }

int guarded(const std::function<int()>& fn, std::ostream& err) {
  try {
    return fn();
  } catch (const InvalidInput& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const ResourceGuard& e) {
    err << "resource guard: " << e.what() << '\n';
    return kResourceGuard;
  } catch (const NotConverged& e) {
    err << "not converged: " << e.what() << '\n';
    return kResourceGuard;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvariantFailure;
  }
}

// --- wilson scan ------------------------------------------------------------

WilsonScanResult wilson_scan(const RunConfig& cfg, const std::vector<int>& js) {
  cfg.validate();
  const Complex cx = Complex::box(cfg.m, cfg.N);
  const ModelParams params{cfg.beta, cfg.kappa, cfg.k, &cx};
  params.validate();
  std::vector<Observable> obs;
  for (int j : js) {
    if (j < 1) throw InvalidInput("Wilson charges must be >= 1");
    for (const auto& [w, h] : cfg.loops) obs.push_back({rectangle_family(cx, w, h), j});
  }
  // Bulk single-edge observables for the GHS floor.
  std::vector<Chain> edges;
  for (int e : bulk_edges(cx)) {
    Chain c(1);
    c.add(cx.cells(1)[e], 1);
    edges.push_back(std::move(c));
  }
  const std::size_t loop_obs = obs.size();
  for (int j : js) obs.push_back({edges, j});

  SamplerConfig sc = cfg.sampler;
  sc.workers = worker_count();
  const SampleSeries s = sample_observables(params, sc, obs);

  WilsonScanResult res;
  res.acceptance = s.acceptance;
  std::size_t o = 0;
  for (int j : js) {
    std::vector<LoopPoint> pts;
    for (const auto& [w, h] : cfg.loops) {
      const Estimate re = binned_estimate(s.re[o], sc.bins);
      const Estimate im = binned_estimate(s.im[o], sc.bins);
      WilsonScanPoint p;
      p.w = w;
      p.h = h;
      p.j = j;
      p.point = {2 * (w + h), w * h, re.mean, re.std_error};
      p.im = im.mean;
      p.im_err = im.std_error;
      res.points.push_back(p);
      pts.push_back(p.point);
      ++o;
    }
    try {
      res.fits[j] = decay_fit(pts);
    } catch (const InvalidInput&) {
      // Too few loops above noise; callers report the missing fit.
    }
  }
  for (std::size_t i = 0; i < js.size(); ++i) {
    res.single_edge[js[i]] = binned_estimate(s.re[loop_obs + i], sc.bins);
  }
  return res;
}

int cmd_wilson_scan(const CommandContext& ctx) {
  const RunConfig& cfg = ctx.cfg;
  warn_low_dimension(ctx);
  RunRecorder rec("wilson-scan", cfg, cfg.out);
  rec.add_seed(cfg.sampler.seed);
  const WilsonScanResult r = wilson_scan(cfg, {cfg.j});
  std::ostringstream loops, fit, ghs;
  loops << "perimeter,area,W,W_err\n";
  for (const auto& p : r.points) {
    loops << p.point.perimeter << ',' << p.point.area << ',' << num(p.point.W) << ',' << num(p.point.W_err) << '\n';
  }
  rec.write("wilson.csv", loops.str());
  fit << "c_perim,c_area,residual\n";
  auto& out = ctx.out();
  const auto f = r.fits.find(cfg.j);
  if (f != r.fits.end()) {
    const DecayFit& d = f->second;
    double rms = 0.0;
    for (double x : d.residuals) rms += x * x;
    rms = std::sqrt(rms / static_cast<double>(d.residuals.size()));
    fit << num(d.c_perim) << ',' << num(d.c_area) << ',' << num(rms) << '\n';
    out << "fit: c_perim = " << d.c_perim << " +- " << d.err_perim << ", c_area = " << d.c_area << " +- "
        << d.err_area << ", separation (area - perimeter) = " << d.separation() << " sigma, "
        << (d.separation() > 0 ? "area" : "perimeter") << "-dominant\n";
    for (std::size_t i : d.excluded) {
      out << "excluded loop " << r.points[i].w << "x" << r.points[i].h << " (W <= 3 sigma)\n";
    }
  } else {
    out << "fit: fewer than 4 loops above 3 sigma; no decay fit\n";
  }
  rec.write("wilson_fit.csv", fit.str());
  if (cfg.k >= 1 && cfg.j % cfg.k == 0) {
    const Estimate& e = r.single_edge.at(cfg.j);
    ghs << "perimeter,area,floor,floor_err,W,W_err,satisfied\n";
    bool all = true;
    for (const auto& p : r.points) {
      const double fl = std::pow(e.mean, p.point.perimeter);
      const double fe = p.point.perimeter * std::pow(std::abs(e.mean), p.point.perimeter - 1) * e.std_error;
      const bool ok = fl <= p.point.W + 4.0 * std::hypot(fe, p.point.W_err);
      all = all && ok;
      ghs << p.point.perimeter << ',' << p.point.area << ',' << num(fl) << ',' << num(fe) << ','
          << num(p.point.W) << ',' << num(p.point.W_err) << ',' << (ok ? "true" : "false") << '\n';
    }
    rec.write("wilson_ghs.csv", ghs.str());
    out << "GHS floor " << (all ? "satisfied" : "VIOLATED") << " on all loops\n";
  }
  out << "acceptance rate " << r.acceptance << "; manifest " << rec.finish().string() << '\n';
  return kOk;
}

// --- mf ratio ---------------------------------------------------------------

int cmd_mf_ratio(const CommandContext& ctx) {
  const RunConfig& cfg = ctx.cfg;
  warn_low_dimension(ctx);
  const Complex cx = Complex::box(cfg.m, cfg.N);
  const ModelParams params{cfg.beta, cfg.kappa, cfg.k, &cx};
  RunRecorder rec("mf-ratio", cfg, cfg.out);
  std::ostringstream csv;
  csv << "n,Rn,Tn,num,num_err,den,den_err,ratio,ratio_err,status,bound\n";
  const bool divides = cfg.k >= 1 && cfg.j % cfg.k == 0;
  if (!divides) {
    ctx.out() << "k = " << cfg.k << " does not divide j = " << cfg.j
              << ": open-line expectations vanish identically; numerators are zero\n";
  }
  for (int n : cfg.n) {
    SamplerConfig sc = cfg.sampler;
    sc.seed = cfg.sampler.seed + static_cast<std::uint64_t>(n);
    sc.workers = worker_count();
    rec.add_seed(sc.seed);
    const MfRatioEstimate r = estimate_mf_ratio(cfg.R, cfg.T, n, cfg.j, params, sc);
    std::string bound;
    if (divides) {
      const BoundReport b = confinement_lower_bound(cfg.beta, cfg.kappa, cfg.j, cfg.k, cfg.R, cfg.T, n, cfg.m);
      if (b.valid) bound = num(b.lower_bound);
    }
    csv << n << ',' << r.Rn << ',' << r.Tn << ',' << num(r.num.mean) << ',' << num(r.num.std_error) << ','
        << num(r.den.mean) << ',' << num(r.den.std_error) << ',' << num(r.ratio) << ',' << num(r.ratio_err) << ','
        << to_string(r.status) << ',' << bound << '\n';
    ctx.out() << "n = " << n << ": ratio " << r.ratio << " +- " << r.ratio_err << " [" << to_string(r.status) << "]\n";
  }
  rec.write("mf_ratio.csv", csv.str());
  ctx.out() << "manifest " << rec.finish().string() << '\n';
  return kOk;
}

// --- phase scan -------------------------------------------------------------

std::string phase_scan_csv(const RunConfig& cfg, int* a_m_used) {
  cfg.validate();
  int a_m = cfg.a_m;
  if (a_m == 0) a_m = plaquette_partition(Complex::box(std::max(cfg.m, 2), 2)).count();
  if (a_m_used) *a_m_used = a_m;
  const std::vector<double> betas = grid(cfg.beta_min, cfg.beta_max, cfg.beta_steps);
  const std::vector<double> kappas = grid(cfg.kappa_min, cfg.kappa_max, cfg.kappa_steps);
  const SmallnessReport rep = smallness_scan(betas, kappas, cfg.k, cfg.j, cfg.m, a_m, cfg.holder);
  std::ostringstream os;
  os << "beta,kappa,g1,a_conf,holder_factor\n";
  for (const SmallnessRow& r : rep.rows) {
    os << num(r.beta) << ',' << num(r.kappa) << ',' << num(r.g1) << ',' << num(r.a_conf) << ','
       << num(r.holder_factor) << '\n';
  }
  return os.str();
}

namespace {

// Smallest beta in [0, 50] with f(beta) = level for increasing f, or NaN.
double crossing(const std::function<double(double)>& f, double level) {
  double lo = 0.0, hi = 1.0;
  if (f(lo) > level) return std::nan("");
  while (f(hi) < level) {
    if (hi >= 50.0) return std::nan("");
    lo = hi;
    hi = std::min(50.0, 2.0 * hi);
  }
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) < level ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::string phase_levels_csv(const RunConfig& cfg) {
  cfg.validate();
  const double kappa = cfg.kappa_min;
  std::ostringstream os;
  os << "quantity,level,kappa,beta\n";
  for (double l : cfg.g1_levels) {
    os << "g1," << num(l) << ',' << num(kappa) << ',' << num(crossing([&](double b) { return g1(b, kappa); }, l))
       << '\n';
  }
  if (cfg.j % cfg.k == 0) {
    for (double l : cfg.a_levels) {
      const double b = crossing([&](double x) { return confinement_a(x, kappa, cfg.j, cfg.k, cfg.m); }, l);
      os << "a_conf," << num(l) << ',' << num(kappa) << ',' << num(b) << '\n';
    }
  }
  return os.str();
}

int cmd_phase_scan(const CommandContext& ctx) {
  const RunConfig& cfg = ctx.cfg;
  warn_low_dimension(ctx);
  RunRecorder rec("phase-scan", cfg, cfg.out);
  int a_m = 0;
  rec.write("phase_scan.csv", phase_scan_csv(cfg, &a_m));
  rec.write("phase_levels.csv", phase_levels_csv(cfg));
  std::ostringstream gp;
  gp << "set datafile separator ','\nset key off\nset xlabel 'beta'\nset ylabel 'kappa'\n"
     << "set contour base\nunset surface\nset view map\nset dgrid3d " << cfg.beta_steps << ',' << cfg.kappa_steps
     << "\nset cntrparam levels discrete ";
  for (std::size_t i = 0; i < cfg.g1_levels.size(); ++i) gp << (i ? "," : "") << num(cfg.g1_levels[i]);
  gp << "\nsplot 'phase_scan.csv' every ::1 using 1:2:3 with lines\n";
  rec.write("phase_scan.gp", gp.str());
  ctx.out() << "a_m = " << a_m << (cfg.a_m == 0 ? " (computed plaquette partition)" : " (configured)") << '\n'
            << "manifest " << rec.finish().string() << '\n';
  return kOk;
}

// --- currents ---------------------------------------------------------------

int cmd_currents(const CommandContext& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const NamedComplex nc = named_complex(cfg);
  RunRecorder rec("currents", cfg, cfg.out);
  std::ostringstream rep;
  const InteractionSet set = InteractionSet::charge_k(nc.cx, cfg.k, cfg.beta, cfg.kappa);
  const EnumerationLimits lim = limits_of(cfg);
  rep << "complex " << cfg.complex << ": " << nc.cx.count(0) << " vertices, " << nc.cx.count(1) << " edges, "
      << nc.cx.count(2) << " plaquettes; " << set.terms().size() << " interaction terms; M = " << cfg.M << '\n';
  const bool obstructed = divisibility_obstruction(nc.gamma, cfg.j, cfg.k);
  if (obstructed) {
    rep << "empty by divisibility: j * boundary(gamma) is not divisible by k = " << cfg.k
        << " at some vertex; the expectation is exactly 0\n";
  }
  const WeightedSum den = partition_sum(set, source_of(set, Chain(1), 0), cfg.M, lim);
  const WeightedSum numr = partition_sum(set, source_of(set, nc.gamma, cfg.j), cfg.M, lim);
  rep << "Z[0]:     " << num(den.value) << " + tail <= " << num(den.tail_bound) << " (" << den.count
      << " currents)\n";
  rep << "Z[j*gamma]: " << num(numr.value) << " + tail <= " << num(numr.tail_bound) << " (" << numr.count
      << " currents)\n";
  const ExpectationInterval iv =
      expectation_via_currents(nc.cx, nc.gamma, cfg.j, cfg.k, cfg.beta, cfg.kappa, cfg.M, lim);
  rep << "E[cos(j sigma(gamma))] in [" << num(iv.lower) << ", " << num(iv.upper) << "]"
      << (iv.exact_zero ? " (exact zero)" : "") << '\n';

  std::vector<std::uint64_t> brute_num, brute_den;
  const bool brute = set.terms().size() <= 12 && cfg.M <= 8;
  if (brute) {
    brute_num.assign(static_cast<std::size_t>(cfg.M) + 1, 0);
    brute_den.assign(static_cast<std::size_t>(cfg.M) + 1, 0);
    enumerate_currents_bruteforce(set, source_of(set, nc.gamma, cfg.j), cfg.M,
                                  [&](const Current& c) { ++brute_num[c.total()]; });
    enumerate_currents_bruteforce(set, source_of(set, Chain(1), 0), cfg.M,
                                  [&](const Current& c) { ++brute_den[c.total()]; });
  }
  std::ostringstream levels;
  levels << "level,count_numerator,count_denominator" << (brute ? ",brute_numerator,brute_denominator" : "") << '\n';
  bool brute_ok = true;
  for (int t = 0; t <= cfg.M; ++t) {
    levels << t << ',' << numr.count_by_level[t] << ',' << den.count_by_level[t];
    if (brute) {
      levels << ',' << brute_num[t] << ',' << brute_den[t];
      brute_ok = brute_ok && brute_num[t] == numr.count_by_level[t] && brute_den[t] == den.count_by_level[t];
    }
    levels << '\n';
  }
  if (brute) rep << "per-level counts " << (brute_ok ? "match" : "DIFFER FROM") << " unpruned brute force\n";

  if (cfg.k >= 1 && cfg.j % cfg.k == 0) {
    const Current w = line_witness(set, nc.gamma, cfg.j);
    const std::string text = to_text(set, w);
    const bool valid = satisfies_constraints(set, w, source_of(set, nc.gamma, cfg.j));
    const bool round_trip = from_text(set, text) == w;
    rep << "line witness (" << (valid ? "valid" : "INVALID") << ", round-trip " << (round_trip ? "ok" : "FAILED")
        << "):\n"
        << text;
    rec.write("line_witness.txt", text);
    brute_ok = brute_ok && valid && round_trip;
  }
  if (boundary(nc.gamma).empty()) {
    try {
      const Current s = surface_witness(set, nc.gamma, cfg.j);
      const bool valid = satisfies_constraints(set, s, source_of(set, nc.gamma, cfg.j));
      rep << "surface witness (" << (valid ? "valid" : "INVALID") << "):\n" << to_text(set, s);
      brute_ok = brute_ok && valid;
    } catch (const InvalidInput& e) {
      rep << "surface witness unavailable: " << e.what() << '\n';
    }
  }
  rec.write("currents.txt", rep.str());
  rec.write("currents_levels.csv", levels.str());
  ctx.out() << rep.str() << "manifest " << rec.finish().string() << '\n';
  return brute_ok ? kOk : kInvariantFailure;
}

// --- polymers ---------------------------------------------------------------

int cmd_polymers(const CommandContext& ctx) {
  const RunConfig& cfg = ctx.cfg;
  if (cfg.m < 2) throw InvalidInput("polymers need m >= 2");
  if (cfg.k < 1) throw InvalidInput("polymers need k >= 1");
  const Complex cx = Complex::box(cfg.m, 1);
  RunRecorder rec("polymers", cfg, cfg.out);
  rec.add_seed(cfg.sampler.seed);
  IntegratorConfig ic;
  ic.quad.rel_tol = cfg.rel_tol;
  ic.mc_samples = static_cast<std::uint64_t>(cfg.mc_samples);
  ic.max_quad_edges = cfg.max_quad_edges;
  ic.max_plaquettes = cfg.max_plaquettes;
  ic.seed = cfg.sampler.seed;
  const int a_m = cfg.a_m > 0 ? cfg.a_m : plaquette_partition(cx).count();

  // Connected plaquette sets grown from the plaquette at the origin.
  const Coord o{};
  const int root = cx.index(Cell::plaquette(o, 0, 1));
  std::set<std::vector<int>> polymers{{root}};
  std::vector<std::vector<int>> frontier{{root}};
  const std::size_t max_count = ctx.quick ? 12 : 60;
  for (int size = 2; size <= cfg.max_plaquettes && polymers.size() < max_count; ++size) {
    std::vector<std::vector<int>> next;
    for (const auto& P : frontier) {
      for (int p : P) {
        for (const Incidence& e : cx.plaquette_edges(p)) {
          for (const Incidence& q : cx.coplaquettes(e.index)) {
            if (std::find(P.begin(), P.end(), q.index) != P.end()) continue;
            std::vector<int> Q = P;
            Q.push_back(q.index);
            std::sort(Q.begin(), Q.end());
            if (polymers.size() < max_count && polymers.insert(Q).second) next.push_back(Q);
          }
        }
      }
    }
    frontier = std::move(next);
  }
  const Chain gamma = rectangle_loop(o, 0, 1, 1, 1);
  std::ostringstream csv;
  csv << "id,size,theta_prime,phi_re,phi_im,phi_err,method,bound,within_bound\n";
  int id = 0;
  int violations = 0;
  for (const auto& P : polymers) {
    auto emit = [&](const std::string& tp, const PolymerValue& v, double bound) {
      const bool ok = v.magnitude() <= bound + 3.0 * v.error;
      if (!ok) ++violations;
      csv << id++ << ',' << P.size() << ',' << tp << ',' << num(v.value.real()) << ',' << num(v.value.imag()) << ','
          << num(v.error) << ',' << (v.monte_carlo ? "mc" : "quad") << ',' << num(bound) << ','
          << (ok ? "true" : "false") << '\n';
    };
    if (cfg.k == 1) {
      const PolymerK1 poly = PolymerK1::make(cx, P);
      const PolymerValue v = phi_k1(cx, poly, gamma, cfg.j, cfg.beta, cfg.kappa, ic);
      int touched = 0;
      for (int e : poly.touched_edges) touched += gamma[cx.cells(1)[e]] != 0;
      emit("-", v, holder_k1(cfg.beta, cfg.kappa, a_m, cfg.j, touched, static_cast<int>(P.size())));
    } else {
      for (int r = 0; r < 2; ++r) {
        std::map<int, int> tp;
        if (r == 1) tp[cx.plaquette_edges(P.front())[0].index] = 1;
        const PolymerKk poly = PolymerKk::make(cx, P, tp, cfg.k);
        const PolymerValue v = phi_kk(cx, poly, gamma, cfg.j, cfg.beta, cfg.kappa, ic);
        emit(r == 0 ? "0" : "e:1", v, holder_kk(cx, poly, gamma, cfg.j, cfg.beta, cfg.kappa, a_m));
      }
    }
  }
  rec.write("polymers.csv", csv.str());
  ctx.out() << polymers.size() << " polymers, a_m = " << a_m << ", " << violations << " bound violations\n"
            << "manifest " << rec.finish().string() << '\n';
  return violations == 0 ? kOk : kInvariantFailure;
}

}  // namespace lhiggs::exp
