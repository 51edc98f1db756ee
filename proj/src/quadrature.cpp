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

#include "lhiggs/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>

#include "lhiggs/errors.hpp"
#include "lhiggs/kernels.hpp"

namespace lhiggs::quad {
namespace {

using cplx = std::complex<double>;

double term_value(const Term& t, double phi) {
  double f = std::exp(t.a * (std::cos(phi + t.alpha) - t.offset)) - t.subtract;
  if (t.absolute) f = std::abs(f);
  if (t.power != 1) f = std::pow(f, t.power);
  return f;
}

// Nodes and normalised weights (summing to 1) times the density.
void node_set(const Variable& v, Rule rule, int n, std::vector<double>& x,
              std::vector<double>& wg) {
  x.resize(static_cast<std::size_t>(n));
  wg.resize(static_cast<std::size_t>(n));
  const double half = 0.5 * (v.hi - v.lo);
  const double mid = 0.5 * (v.hi + v.lo);
  if (rule == Rule::gauss_legendre) {
    const auto& [t, w] = gauss_legendre(n);
    for (int i = 0; i < n; ++i) {
      x[i] = mid + half * t[i];
      wg[i] = 0.5 * w[i];
    }
  } else {
    const double h = (v.hi - v.lo) / n;
    for (int i = 0; i < n; ++i) {
      x[i] = v.lo + (i + 0.5) * h;
      wg[i] = 1.0 / n;
    }
  }
  if (v.density_a != 0.0) {
    for (int i = 0; i < n; ++i) wg[i] *= std::exp(v.density_a * std::cos(v.density_k * x[i]));
  }
}

struct InnerTerm {
  const Term* term = nullptr;
  std::vector<double> scaled;  // coefficient * nodes of the innermost angle
};

// One connected block of variables, set up for a fixed node count.
class BlockEval {
 public:
  BlockEval(const Problem& p, const std::vector<int>& vars, Rule rule, int n)
      : p_(p), vars_(vars), n_(n) {
    const std::size_t depth = vars.size();
    level_of_.assign(p.vars.size(), -1);
    for (std::size_t l = 0; l < depth; ++l) level_of_[vars[l]] = static_cast<int>(l);
    x_.resize(depth);
    wg_.resize(depth);
    for (std::size_t l = 0; l < depth; ++l) node_set(p.vars[vars[l]], rule, n, x_[l], wg_[l]);

    level_terms_.resize(depth);
    const int inner = static_cast<int>(depth) - 1;
    for (const Term& t : p.terms) {
      int last = -1;
      for (const auto& [v, c] : t.coefs) {
        if (c != 0 && level_of_[v] >= 0) last = std::max(last, level_of_[v]);
      }
      if (last < 0) continue;  // term belongs to another block
      if (last == inner) {
        InnerTerm it;
        it.term = &t;
        int c_inner = 0;
        for (const auto& [v, c] : t.coefs) {
          if (level_of_[v] == inner) c_inner += c;
        }
        it.scaled.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) it.scaled[i] = c_inner * x_[inner][i];
        inner_terms_.push_back(std::move(it));
      } else {
        level_terms_[last].push_back(&t);
      }
    }
    const Variable& vin = p.vars[vars[inner]];
    cosq_.resize(static_cast<std::size_t>(n));
    sinq_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      cosq_[i] = std::cos(vin.phase * x_[inner][i]);
      sinq_[i] = std::sin(vin.phase * x_[inner][i]);
    }
    buf_.resize(static_cast<std::size_t>(n));
    tmp_.resize(static_cast<std::size_t>(n));
    theta_.assign(p.vars.size(), 0.0);
  }

  cplx run() {
    acc_ = 0.0;
    recurse(0, 1.0, 0.0);
    return acc_;
  }

 private:
  double phi_of(const Term& t) const {
    double phi = 0.0;
    for (const auto& [v, c] : t.coefs) phi += c * theta_[v];
    return phi;
  }

  void recurse(std::size_t level, double weight, double psi) {
    const std::size_t inner = vars_.size() - 1;
    const int var = vars_[level];
    const int q = p_.vars[var].phase;
    if (level < inner) {
      for (int i = 0; i < n_; ++i) {
        const double xi = x_[level][i];
        theta_[var] = xi;
        double w = weight * wg_[level][i];
        for (const Term* t : level_terms_[level]) w *= term_value(*t, phi_of(*t));
        if (w == 0.0) continue;
        recurse(level + 1, w, psi + q * xi);
      }
      theta_[var] = 0.0;
      return;
    }
    std::copy(wg_[inner].begin(), wg_[inner].end(), buf_.begin());
    theta_[var] = 0.0;
    for (const InnerTerm& it : inner_terms_) {
      const Term& t = *it.term;
      // With the innermost angle parked at 0, phi_of() is the shift.
      const double shift = t.alpha + phi_of(t);
      if (!t.absolute && t.power == 1) {
        kernels::mul_exp_cos(it.scaled, t.a, shift, t.offset, t.subtract, buf_);
      } else {
        std::fill(tmp_.begin(), tmp_.end(), 1.0);
        kernels::mul_exp_cos(it.scaled, t.a, shift, t.offset, t.subtract, tmp_);
        for (int i = 0; i < n_; ++i) {
          double f = t.absolute ? std::abs(tmp_[i]) : tmp_[i];
          if (t.power != 1) f = std::pow(f, t.power);
          buf_[i] *= f;
        }
      }
    }
    const double a = kernels::dot(buf_, cosq_);
    const double b = q == 0 ? 0.0 : kernels::dot(buf_, sinq_);
    acc_ += weight * std::polar(1.0, psi) * cplx(a, b);
  }

  const Problem& p_;
  std::vector<int> vars_;
  int n_;
  std::vector<int> level_of_;
  std::vector<std::vector<double>> x_;
  std::vector<std::vector<double>> wg_;
  std::vector<std::vector<const Term*>> level_terms_;
  std::vector<InnerTerm> inner_terms_;
  std::vector<double> cosq_, sinq_, buf_, tmp_, theta_;
  cplx acc_ = 0.0;
};

void validate(const Problem& p) {
  for (const Variable& v : p.vars) {
    if (!(v.hi > v.lo) || !std::isfinite(v.lo) || !std::isfinite(v.hi)) {
      throw InvalidInput("quadrature variable needs a finite interval lo < hi");
    }
  }
  for (const Term& t : p.terms) {
    if (t.power < 1) throw InvalidInput("quadrature term power must be >= 1");
    for (const auto& [v, c] : t.coefs) {
      if (v < 0 || static_cast<std::size_t>(v) >= p.vars.size()) {
        throw InvalidInput("quadrature term references an unknown variable");
      }
    }
  }
}

std::vector<int> resolve_order(const Problem& p, const std::vector<int>& order) {
  std::vector<int> ord = order;
  if (ord.empty()) {
    ord.resize(p.vars.size());
    std::iota(ord.begin(), ord.end(), 0);
  }
  std::vector<int> check = ord;
  std::sort(check.begin(), check.end());
  for (std::size_t i = 0; i < check.size(); ++i) {
    if (check.size() != p.vars.size() || check[i] != static_cast<int>(i)) {
      throw InvalidInput("quadrature order must be a permutation of the variables");
    }
  }
  return ord;
}

double block_cost(const Problem& p, const std::vector<int>& block, int n) {
  std::size_t terms = 0;
  for (const Term& t : p.terms) {
    for (const auto& [v, c] : t.coefs) {
      if (std::find(block.begin(), block.end(), v) != block.end()) {
        ++terms;
        break;
      }
    }
  }
  return std::pow(static_cast<double>(n), static_cast<double>(block.size())) *
         static_cast<double>(terms + 1);
}

}  // namespace

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n) {
  if (n < 1 || n > 4096) throw InvalidInput("Gauss-Legendre order out of range");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<std::pair<std::vector<double>, std::vector<double>>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (slot) return *slot;
  auto rule = std::make_unique<std::pair<std::vector<double>, std::vector<double>>>();
  auto& [x, w] = *rule;
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  // Newton on P_n from the Chebyshev-like initial guess; nodes symmetric.
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = 0.0;
    for (int j = 1; j <= n; ++j) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
    }
    dp = n * (z * p0 - p1) / (z * z - 1.0);
    x[i] = -z;
    x[n - 1 - i] = z;
    const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
    w[i] = wi;
    w[n - 1 - i] = wi;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
  slot = std::move(rule);
  return *slot;
}

std::vector<std::vector<int>> blocks(const Problem& p, const std::vector<int>& order) {
  const std::vector<int> ord = resolve_order(p, order);
  std::vector<int> parent(p.vars.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const Term& t : p.terms) {
    int first = -1;
    for (const auto& [v, c] : t.coefs) {
      if (c == 0) continue;
      if (first < 0) {
        first = v;
      } else {
        parent[find(v)] = find(first);
      }
    }
  }
  std::map<int, std::vector<int>> groups;
  std::vector<int> root_first;
  for (int v : ord) {
    const int r = find(v);
    auto [it, fresh] = groups.emplace(r, std::vector<int>{});
    if (fresh) root_first.push_back(r);
    it->second.push_back(v);
  }
  std::vector<std::vector<int>> out;
  for (int r : root_first) out.push_back(groups[r]);
  return out;
}

std::complex<double> integrate_fixed(const Problem& p, Rule rule, int n,
                                     const std::vector<int>& order) {
  validate(p);
  cplx total = 1.0;
  for (const auto& b : blocks(p, order)) {
    BlockEval ev(p, b, rule, n);
    total *= ev.run();
  }
  return total;
}

Result integrate(const Problem& p, const Options& opt) {
  validate(p);
  if (opt.n0 < 1 || opt.n_max < opt.n0) throw InvalidInput("quadrature node limits invalid");
  Result res;
  res.value = 1.0;
  std::vector<cplx> vals;
  std::vector<double> errs;
  for (const auto& b : blocks(p, opt.order)) {
    int n = opt.n0;
    if (res.evals + block_cost(p, b, n) > opt.max_evals) {
      throw ResourceGuard("quadrature evaluation budget exceeded (" +
                          std::to_string(b.size()) + " coupled angles)");
    }
    cplx prev = BlockEval(p, b, opt.rule, n).run();
    res.evals += block_cost(p, b, n);
    for (;;) {
      const int n2 = 2 * n;
      if (n2 > opt.n_max) {
        throw NotConverged("quadrature did not converge by " + std::to_string(opt.n_max) +
                           " nodes per angle");
      }
      const double cost = block_cost(p, b, n2);
      if (res.evals + cost > opt.max_evals) {
        throw ResourceGuard("quadrature evaluation budget exceeded at " + std::to_string(n2) +
                            " nodes for " + std::to_string(b.size()) + " coupled angles");
      }
      const cplx cur = BlockEval(p, b, opt.rule, n2).run();
      res.evals += cost;
      const double diff = std::abs(cur - prev);
      n = n2;
      prev = cur;
      if (diff <= std::max(opt.abs_tol, opt.rel_tol * std::abs(cur))) {
        vals.push_back(cur);
        errs.push_back(diff);
        break;
      }
    }
    res.nodes = std::max(res.nodes, n);
  }
  for (const cplx& v : vals) res.value *= v;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    double others = 1.0;
    for (std::size_t j = 0; j < vals.size(); ++j) {
      if (j != i) others *= std::abs(vals[j]);
    }
    res.error += errs[i] * others;
  }
  return res;
}

}  // namespace lhiggs::quad
