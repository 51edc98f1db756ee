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

#include <cmath>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "lhiggs/bessel.hpp"
#include "lhiggs/currents.hpp"
#include "lhiggs/errors.hpp"
#include "lhiggs/experiments.hpp"
#include "lhiggs/kernels.hpp"
#include "lhiggs/oracle.hpp"
#include "lhiggs/polymer.hpp"

namespace lhiggs::exp {

namespace {

using Rng = std::mt19937_64;

Chain random_chain(const Complex& cx, int d, Rng& rng, int cells) {
  Chain c(d);
  std::uniform_int_distribution<std::size_t> pick(0, cx.count(d) - 1);
  std::uniform_int_distribution<int> coef(-3, 3);
  for (int i = 0; i < cells; ++i) c.add(cx.cells(d)[pick(rng)], coef(rng));
  return c;
}

InvariantResult check_dec(int trials, Rng& rng) {
  for (int m : {2, 3, 4}) {
    const Complex cx = Complex::box(m, m == 4 ? 1 : 2);
    std::uniform_real_distribution<double> ang(-10.0, 10.0);
    for (int t = 0; t < trials; ++t) {
      const Chain a = random_chain(cx, 2, rng, 5);
      if (!boundary(boundary(a)).empty()) return {"dec.boundary_squared", false, "nonzero at m=" + std::to_string(m)};
      const Chain b = random_chain(cx, 1, rng, 5);
      if (pairing(boundary(a), b) != pairing(a, coboundary(b, cx))) {
        return {"dec.adjointness", false, "pairing mismatch at m=" + std::to_string(m)};
      }
      DiffForm w{0, std::vector<double>(cx.count(0))};
      for (double& x : w.values) x = ang(rng);
      const DiffForm dd = exterior_derivative(exterior_derivative(w, cx), cx);
      for (double x : dd.values) {
        if (std::abs(wrap_angle(x)) > 1e-8) return {"dec.dd_zero", false, "dd != 0 mod 2pi"};
      }
    }
  }
  return {"dec.calculus", true, std::to_string(trials) + " random chains/forms per m in {2,3,4}"};
}

InvariantResult check_simd() {
  const kernels::KernelTable* v = kernels::avx2_table();
  if (!v) return {"simd.equivalence", true, "no vector backend on this CPU; scalar only"};
  const kernels::KernelTable& s = kernels::scalar_table();
  Rng rng(7);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  std::vector<double> x(1031), a(x.size()), b(x.size());
  for (double& y : x) y = u(rng);
  double worst = 0.0;
  s.cos(x.data(), a.data(), x.size());
  v->cos(x.data(), b.data(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(x[i])));
  s.sin(x.data(), a.data(), x.size());
  v->sin(x.data(), b.data(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(x[i])));
  const bool ok = worst <= 1e-14;
  std::ostringstream d;
  d << "max scaled |cos/sin difference| = " << worst;
  return {"simd.equivalence", ok, d.str()};
}

InvariantResult check_bessel(bool corrupt) {
  for (double kappa : {0.1, 0.5, 1.0}) {
    BesselTable t = BesselTable::make(kappa, 4);
    if (corrupt) t.values[1] *= 1.001;
    for (int i = 0; i <= 4; ++i) {
      const SeriesValue q = b_charge(i, 1, kappa);
      if (std::abs(t[i] - q.value) > 1e-10 * std::max(1.0, q.value)) {
        std::ostringstream d;
        d << "I_" << i << "(2*" << kappa << ") table " << t[i] << " vs quadrature " << q.value;
        return {"bessel.table_vs_quadrature", false, d.str()};
      }
    }
  }
  return {"bessel.table_vs_quadrature", true, "I_0..I_4 at kappa in {0.1, 0.5, 1}"};
}

InvariantResult check_currents_bruteforce() {
  const Cell p = Cell::plaquette(Coord{}, 0, 1);
  const Complex cx = Complex::closure(2, std::span<const Cell>(&p, 1));
  const InteractionSet set = InteractionSet::charge_k(cx, 1, 0.3, 0.2);
  const Chain gamma = rectangle_loop(Coord{}, 0, 1, 1, 1);
  for (int j : {0, 1}) {
    const auto src = source_of(set, gamma, j);
    std::vector<int> fast(7, 0), brute(7, 0);
    enumerate_currents(set, src, 6, [&](const Current& c) { ++fast[c.total()]; });
    enumerate_currents_bruteforce(set, src, 6, [&](const Current& c) { ++brute[c.total()]; });
    if (fast != brute) return {"currents.bruteforce", false, "per-level counts differ for j=" + std::to_string(j)};
  }
  return {"currents.bruteforce", true, "single plaquette, k=1, M=6"};
}

InvariantResult check_divisibility() {
  const Cell e = Cell::edge(Coord{}, 0);
  const Complex cx = Complex::closure(2, std::span<const Cell>(&e, 1));
  Chain g(1);
  g.add(e, 1);
  const InteractionSet set = InteractionSet::charge_k(cx, 2, 0.3, 0.3);
  std::size_t found = 0;
  enumerate_currents(set, source_of(set, g, 1), 8, [&](const Current&) { ++found; });
  if (!divisibility_obstruction(g, 1, 2) || found != 0) {
    return {"currents.divisibility", false, "open edge k=2 j=1 admits currents"};
  }
  const Current w = line_witness(set, g, 2);
  if (!satisfies_constraints(set, w, source_of(set, g, 2))) {
    return {"currents.divisibility", false, "line witness invalid for k | j"};
  }
  return {"currents.divisibility", true, "empty up to M=8 for k=2, j=1; witness valid for j=2"};
}

InvariantResult check_cross(bool quick, std::string* csv, std::ostream* progress) {
  std::vector<CrossCase> suite = default_suite();
  if (quick) {
    std::vector<CrossCase> sub;
    for (auto& c : suite) {
      if (c.id.rfind("pendant", 0) == 0) continue;
      if (c.instance.beta == 0.1 || c.instance.kappa == 0.1) continue;
      sub.push_back(std::move(c));
    }
    suite = std::move(sub);
  }
  if (progress) *progress << "cross-validating " << suite.size() << " instances...\n";
  const CrossReport rep = cross_validate(suite);
  if (csv) *csv = rep.csv();
  std::ostringstream d;
  d << rep.rows.size() << " comparisons, " << rep.failures.size() << " failures, " << rep.flagged << " flagged";
  if (!rep.failures.empty()) d << "; first: " << rep.failures.front();
  return {"oracle.cross_validate", rep.ok(), d.str()};
}

InvariantResult check_bound_formula() {
  for (double beta : {0.001, 0.002, 0.01}) {
    for (double kappa : {0.0, 0.1}) {
      const BoundReport b = confinement_lower_bound(beta, kappa, 1, 1, 2, 3, 2, 4);
      const double c = 1.0 + 16.0 * 3.0;
      const double a = c * c * (std::exp(beta) - 1.0) * std::exp(4.0 * kappa);
      if (a >= 1.0) {
        if (b.valid) return {"bound.closed_form", false, "valid reported for a >= 1"};
        continue;
      }
      const double ref = 1.0 - 2.0 * a / ((1.0 - a) * (1.0 - a)) - 6.0 * std::pow(a, 4.0) / (1.0 - a);
      if (!b.valid || std::abs(b.lower_bound - ref) > 1e-12) return {"bound.closed_form", false, "mismatch"};
    }
  }
  return {"bound.closed_form", true, "matches closed form; invalid for a >= 1"};
}

InvariantResult check_level_set() {
  const double b = std::log(2.0);
  if (std::abs(g1(b, 0.0) - 1.0) > 1e-12) return {"phase.g1_level_set", false, "g1(ln 2, 0) != 1"};
  return {"phase.g1_level_set", true, "g1 = 1 crosses kappa = 0 at beta = ln 2"};
}

InvariantResult check_mc_edge(bool quick) {
  const Complex cx = Complex::box(2, 1);
  const ModelParams mp{0.0, 0.5, 1, &cx};
  SamplerConfig sc;
  sc.sweeps = quick ? 4000 : 20000;
  sc.burn_in = 500;
  sc.seed = 99;
  Chain g(1);
  g.add(Cell::edge(Coord{}, 0), 1);
  const WilsonEstimate w = estimate_wilson(g, 1, mp, sc);
  const double exact = bessel_i(1, 1.0).value / bessel_i(0, 1.0).value;
  std::ostringstream d;
  d << "W = " << w.re.mean << " +- " << w.re.std_error << " vs I1/I0 = " << exact;
  const bool ok = std::abs(w.re.mean - exact) <= 4.0 * w.re.std_error && std::abs(w.im.mean) <= 4.0 * w.im.std_error;
  return {"mc.single_edge", ok, d.str()};
}

InvariantResult check_local_energy() {
  const Complex cx = Complex::box(3, 1);
  const ModelParams mp{0.7, 0.4, 2, &cx};
  Rng rng(3);
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  LinkField s(cx.count(1));
  for (double& x : s) x = u(rng);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(s.size()) - 1);
  for (int t = 0; t < 200; ++t) {
    const int e = pick(rng);
    const double prop = u(rng);
    const double local = local_delta_energy(s, mp, e, prop);
    LinkField s2 = s;
    s2[e] = prop;
    if (std::abs(local - (hamiltonian(s2, mp) - hamiltonian(s, mp))) > 1e-10) {
      return {"mc.local_energy", false, "local dE differs from global recompute"};
    }
  }
  return {"mc.local_energy", true, "200 random single-link updates"};
}

InvariantResult check_holder(bool quick) {
  const Complex cx = Complex::box(2, 1);
  const int a_m = plaquette_partition(cx).count();
  const Chain gamma = rectangle_loop(Coord{}, 0, 1, 1, 1);
  IntegratorConfig ic;
  ic.mc_samples = quick ? 20000 : 100000;
  int checked = 0;
  for (double beta : {0.1, 0.4}) {
    for (double kappa : {0.1, 0.4}) {
      for (std::size_t p = 0; p < cx.count(2); ++p) {
        const PolymerK1 poly = PolymerK1::make(cx, {static_cast<int>(p)});
        const PolymerValue v = phi_k1(cx, poly, gamma, 1, beta, kappa, ic);
        int touched = 0;
        for (int e : poly.touched_edges) touched += gamma[cx.cells(1)[e]] != 0;
        const double bound = holder_k1(beta, kappa, a_m, 1, touched, 1);
        if (v.magnitude() > bound + 3.0 * v.error) {
          return {"polymer.holder", false, "|phi| exceeds the Hoelder bound"};
        }
        ++checked;
      }
    }
  }
  return {"polymer.holder", true, std::to_string(checked) + " single-plaquette polymers"};
}

}  // namespace

std::vector<InvariantResult> run_validation(const ValidateOptions& opt, std::string* cross_csv,
                                            std::ostream* progress) {
  if (!opt.inject_fault.empty() && opt.inject_fault != "bessel") {
    throw InvalidInput("unknown fault '" + opt.inject_fault + "' (supported: bessel)");
  }
  Rng rng(20260101);
  std::vector<InvariantResult> out;
  auto run = [&](const std::function<InvariantResult()>& f) {
    out.push_back(f());
    if (progress) *progress << (out.back().pass ? "  ok   " : "  FAIL ") << out.back().name << '\n';
  };
  run([&] { return check_dec(opt.quick ? 50 : 400, rng); });
  run(check_simd);
  run([&] { return check_bessel(opt.inject_fault == "bessel"); });
  run(check_currents_bruteforce);
  run(check_divisibility);
  run(check_bound_formula);
  run(check_level_set);
  run(check_local_energy);
  run([&] { return check_mc_edge(opt.quick); });
  run([&] { return check_holder(opt.quick); });
  run([&] { return check_cross(opt.quick, cross_csv, progress); });
  return out;
}

int cmd_validate(const CommandContext& ctx, const ValidateOptions& opt) {
  RunRecorder rec("validate", ctx.cfg, ctx.cfg.out);
  std::string cross;
  const std::vector<InvariantResult> res = run_validation(opt, &cross, &ctx.out());
  std::ostringstream table, csv;
  csv << "invariant,pass,detail\n";
  bool all = true;
  table << '\n' << std::left << std::setw(30) << "invariant" << std::setw(6) << "pass" << "detail\n";
  for (const InvariantResult& r : res) {
    all = all && r.pass;
    table << std::left << std::setw(30) << r.name << std::setw(6) << (r.pass ? "yes" : "NO") << r.detail << '\n';
    std::string detail = r.detail;
    for (char& c : detail) {
      if (c == ',') c = ';';
    }
    csv << r.name << ',' << (r.pass ? "true" : "false") << ',' << detail << '\n';
  }
  rec.write("validate.csv", csv.str());
  rec.write("cross_validate.csv", cross);
  ctx.out() << table.str() << (all ? "all invariants hold" : "invariant failure") << "\nmanifest "
            << rec.finish().string() << '\n';
  return all ? kOk : kInvariantFailure;
}

}  // namespace lhiggs::exp
