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

#include "lhiggs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lhiggs/currents.hpp"
#include "lhiggs/errors.hpp"

namespace lhiggs {

namespace {

constexpr double kRounding = 1e-13;

quad::Problem build_problem(const OracleInstance& inst, bool with_source) {
  const Complex& cx = inst.complex;
  quad::Problem p;
  for (std::size_t e = 0; e < cx.count(1); ++e) {
    quad::Variable v;
    v.lo = -std::numbers::pi;
    v.hi = std::numbers::pi;
    v.density_a = 2.0 * inst.kappa;
    v.density_k = inst.k;
    p.vars.push_back(v);
  }
  if (with_source) {
    for (const auto& [cell, c] : inst.gamma.coeffs()) {
      p.vars[cx.index(cell)].phase += static_cast<int>(inst.j * c);
    }
  }
  for (std::size_t q = 0; q < cx.count(2); ++q) {
    quad::Term t;
    for (const Incidence& inc : cx.plaquette_edges(static_cast<int>(q))) t.coefs.emplace_back(inc.index, inc.sign);
    t.a = 2.0 * inst.beta;
    p.terms.push_back(std::move(t));
  }
  return p;
}

OracleValue integrate_instance(const OracleInstance& inst, bool with_source) {
  inst.validate();
  quad::Options opt;
  opt.rule = inst.rule;
  opt.n0 = inst.nodes;
  opt.n_max = 2 * 256;
  // Nested sums of ~1e8 terms carry ~1e-13 absolute rounding noise.
  opt.rel_tol = 1e-12;
  opt.abs_tol = 1e-12;
  const quad::Result r = quad::integrate(build_problem(inst, with_source), opt);
  const double re = r.value.real();
  if (std::abs(r.value.imag()) >= 1e-10 * std::max(1.0, std::abs(re))) {
    throw NotConverged("oracle integral has a nonzero imaginary part");
  }
  return {re, r.error + kRounding * std::abs(re), r.nodes};
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

void OracleInstance::validate() const {
  const std::size_t L = complex.count(1);
  if (L == 0) throw InvalidInput("oracle complex has no links");
  if (L > static_cast<std::size_t>(kOracleMaxLinks)) {
    throw ResourceGuard("oracle limited to " + std::to_string(kOracleMaxLinks) + " links, got " +
                        std::to_string(L));
  }
  if (nodes < 16 || nodes > 256 || (nodes & (nodes - 1)) != 0) {
    throw InvalidInput("oracle nodes must be a power of two in 16..256");
  }
  if (j < 0 || k < 0) throw InvalidInput("charges must be >= 0");
  if (!(beta >= 0.0) || !(kappa >= 0.0) || !std::isfinite(beta) || !std::isfinite(kappa)) {
    throw InvalidInput("couplings must be finite and >= 0");
  }
  if (!gamma.empty()) {
    if (gamma.dim() != 1) throw InvalidInput("oracle gamma must be a 1-chain");
    for (const auto& [cell, c] : gamma.coeffs()) complex.index(cell);
  }
}

OracleValue quadrature_partition(const OracleInstance& inst) { return integrate_instance(inst, true); }

OracleValue oracle_expectation(const OracleInstance& inst) {
  const OracleValue num = integrate_instance(inst, true);
  const OracleValue den = integrate_instance(inst, false);
  if (!(den.value > 0.0)) throw NotConverged("oracle normalisation is not positive");
  OracleValue out;
  out.value = num.value / den.value;
  out.error = num.error / den.value + std::abs(out.value) * den.error / den.value + kRounding;
  out.nodes = std::max(num.nodes, den.nodes);
  return out;
}

std::string CrossReport::csv() const {
  std::ostringstream os;
  os << "instance_id,method_a,method_b,value_a,value_b,tolerance,pass\n";
  for (const CrossRow& r : rows) {
    os << r.instance_id << ',' << r.method_a << ',' << r.method_b << ',' << fmt(r.value_a) << ','
       << fmt(r.value_b) << ',' << fmt(r.tolerance) << ',' << r.pass << '\n';
  }
  return os.str();
}

CrossReport cross_validate(const std::vector<CrossCase>& cases, const CrossOptions& opt) {
  for (const CrossCase& c : cases) {
    const OracleInstance& in = c.instance;
    const CurrentsRequest& cr = c.currents;
    if (cr.k != in.k || cr.j != in.j || cr.beta != in.beta || cr.kappa != in.kappa) {
      throw InvalidInput("case " + c.id + ": current-side model (k, j, beta, kappa) differs from the oracle instance");
    }
    in.validate();
  }
  CrossReport rep;
  auto push = [&](CrossRow row, bool ok) {
    if (!ok && row.pass != "interval-too-wide") rep.failures.push_back(row.instance_id + ":" + row.method_b);
    rep.rows.push_back(std::move(row));
  };
  for (const CrossCase& c : cases) {
    OracleInstance gl = c.instance;
    gl.rule = quad::Rule::gauss_legendre;
    OracleInstance tr = c.instance;
    tr.rule = quad::Rule::trapezoid;
    const OracleValue a = oracle_expectation(gl);
    const OracleValue b = oracle_expectation(tr);
    {
      const double tol = a.error + b.error;
      const bool ok = std::abs(a.value - b.value) <= tol;
      push({c.id, "quad_gl", "quad_trap", a.value, b.value, tol, ok ? "true" : "false"}, ok);
    }
    {
      const ExpectationInterval iv = expectation_via_currents(c.instance.complex, c.instance.gamma, c.currents.j,
                                                              c.currents.k, c.currents.beta, c.currents.kappa,
                                                              c.currents.M);
      const double tol = 0.5 * iv.width() + a.error;
      const bool inside = std::abs(a.value - iv.midpoint()) <= tol;
      std::string flag = inside ? "true" : "false";
      if (inside && iv.width() > opt.max_interval_width) {
        flag = "interval-too-wide";
        ++rep.flagged;
      }
      push({c.id, "quad_gl", "currents", a.value, iv.midpoint(), tol, flag}, inside);
    }
    if (c.monte_carlo) {
      ModelParams mp{c.instance.beta, c.instance.kappa, c.instance.k, &c.instance.complex};
      if (c.instance.j == 0) continue;
      const WilsonEstimate w = estimate_wilson(c.instance.gamma, c.instance.j, mp, *c.monte_carlo);
      const double tol = opt.mc_sigmas * w.re.std_error + a.error;
      const bool ok = std::abs(a.value - w.re.mean) <= tol;
      push({c.id, "quad_gl", "mc", a.value, w.re.mean, tol, ok ? "true" : "false"}, ok);
    }
  }
  return rep;
}

std::vector<CrossCase> default_suite(int M) {
  struct Geometry {
    std::string name;
    Complex cx;
    Chain gamma;
  };
  const Coord o{};
  Coord x1{};
  x1[0] = 1;
  std::vector<Geometry> geoms;
  {
    const Cell e = Cell::edge(o, 0);
    Chain g(1);
    g.add(e, 1);
    geoms.push_back({"edge", Complex::closure(2, std::span<const Cell>(&e, 1)), g});
  }
  {
    const Cell p = Cell::plaquette(o, 0, 1);
    Chain pc(2);
    pc.add(p, 1);
    geoms.push_back({"plaquette", Complex::closure(2, std::span<const Cell>(&p, 1)), boundary(pc)});
  }
  {
    const std::vector<Cell> cells{Cell::plaquette(o, 0, 1), Cell::edge(x1, 0)};
    Chain g(1);
    g.add(Cell::edge(o, 0), 1);
    g.add(Cell::edge(x1, 0), 1);
    geoms.push_back({"pendant", Complex::closure(2, cells), g});
  }
  const double couplings[] = {0.0, 0.1, 0.3};
  std::vector<CrossCase> out;
  for (const Geometry& g : geoms) {
    for (double beta : couplings) {
      for (double kappa : couplings) {
        for (int k : {1, 2}) {
          std::vector<int> js{0, 1, k, 2 * k};
          std::sort(js.begin(), js.end());
          js.erase(std::unique(js.begin(), js.end()), js.end());
          for (int j : js) {
            CrossCase c;
            std::ostringstream id;
            id << g.name << "_b" << beta << "_K" << kappa << "_k" << k << "_j" << j;
            c.id = id.str();
            c.instance.complex = g.cx;
            c.instance.gamma = g.gamma;
            c.instance.j = j;
            c.instance.k = k;
            c.instance.beta = beta;
            c.instance.kappa = kappa;
            c.currents = {k, j, beta, kappa, M};
            out.push_back(std::move(c));
          }
        }
      }
    }
  }
  return out;
}

}  // namespace lhiggs
