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

#include "lhiggs/currents.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>

#include "lhiggs/errors.hpp"
#include "lhiggs/stats.hpp"

namespace lhiggs {

// --- interaction sets -------------------------------------------------------

void InteractionSet::add_pair(std::vector<std::pair<int, int>> support, double coupling,
                              const Cell& label) {
  if (!(coupling >= 0.0) || !std::isfinite(coupling)) {
    throw InvalidInput("interaction couplings must be finite and >= 0");
  }
  const int base = static_cast<int>(terms_.size());
  InteractionTerm plus{support, coupling, {label, 1}, base + 1};
  for (auto& [c, v] : support) v = -v;
  InteractionTerm minus{std::move(support), coupling, {label, -1}, base};
  terms_.push_back(std::move(plus));
  terms_.push_back(std::move(minus));
}

InteractionSet InteractionSet::charge_k(const Complex& cx, int k, double beta, double kappa) {
  if (k < 0) throw InvalidInput("charge k must be >= 0");
  InteractionSet s;
  s.cx_ = &cx;
  s.ell_ = 1;
  s.k_ = k;
  for (std::size_t p = 0; p < cx.count(2); ++p) {
    std::vector<std::pair<int, int>> sup;
    for (const Incidence& inc : cx.plaquette_edges(static_cast<int>(p))) sup.emplace_back(inc.index, inc.sign);
    std::sort(sup.begin(), sup.end());
    s.add_pair(std::move(sup), beta, cx.cells(2)[p]);
  }
  for (std::size_t e = 0; e < cx.count(1); ++e) {
    std::vector<std::pair<int, int>> sup;
    if (k != 0) sup.emplace_back(static_cast<int>(e), k);
    s.add_pair(std::move(sup), kappa, cx.cells(1)[e]);
  }
  return s;
}

InteractionSet InteractionSet::pure_gauge(const Complex& cx, double beta) {
  InteractionSet s;
  s.cx_ = &cx;
  s.ell_ = 1;
  for (std::size_t p = 0; p < cx.count(2); ++p) {
    std::vector<std::pair<int, int>> sup;
    for (const Incidence& inc : cx.plaquette_edges(static_cast<int>(p))) sup.emplace_back(inc.index, inc.sign);
    std::sort(sup.begin(), sup.end());
    s.add_pair(std::move(sup), beta, cx.cells(2)[p]);
  }
  return s;
}

InteractionSet InteractionSet::xy(const Complex& cx, double kappa) {
  InteractionSet s;
  s.cx_ = &cx;
  s.ell_ = 0;
  for (std::size_t e = 0; e < cx.count(1); ++e) {
    const auto& tv = cx.edge_vertices(static_cast<int>(e));
    std::vector<std::pair<int, int>> sup{{tv[0], -1}, {tv[1], 1}};
    std::sort(sup.begin(), sup.end());
    s.add_pair(std::move(sup), kappa, cx.cells(1)[e]);
  }
  return s;
}

InteractionSet InteractionSet::from_chains(const Complex& cx, int ell,
                                           const std::vector<std::pair<Chain, double>>& terms) {
  if (ell < 0 || ell > 2) throw InvalidInput("interaction cell dimension must be 0..2");
  InteractionSet s;
  s.cx_ = &cx;
  s.ell_ = ell;
  for (const auto& [chain, coupling] : terms) {
    if (!chain.empty() && chain.dim() != ell) throw InvalidInput("interaction chain has wrong dimension");
    std::vector<std::pair<int, int>> sup;
    Cell label{};
    label.dim = ell;
    bool first = true;
    for (const auto& [cell, v] : chain.coeffs()) {
      sup.emplace_back(cx.index(cell), static_cast<int>(v));
      if (first) label = cell;
      first = false;
    }
    std::sort(sup.begin(), sup.end());
    s.add_pair(std::move(sup), coupling, label);
  }
  return s;
}

int InteractionSet::find(const OrientedCell& c) const {
  // Terms come in (+, -) pairs ordered by generating cell within each kind.
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    if (terms_[t].label == c) return static_cast<int>(t);
  }
  return -1;
}

double InteractionSet::total_coupling() const {
  double s = 0.0;
  for (const auto& t : terms_) s += t.coupling;
  return s;
}

long long Current::total() const {
  long long s = 0;
  for (int v : n) s += v;
  return s;
}

// --- constraints and weights -----------------------------------------------

std::vector<long long> source_of(const InteractionSet& set, const Chain& gamma, int j) {
  std::vector<long long> src(set.cell_count(), 0);
  if (gamma.empty()) return src;
  if (gamma.dim() != set.ell()) throw InvalidInput("source chain dimension does not match interaction set");
  for (const auto& [cell, v] : gamma.coeffs()) {
    src[set.complex().index(cell)] += static_cast<long long>(j) * v;
  }
  return src;
}

long long constraint_residual(const InteractionSet& set, const Current& n,
                              const std::vector<long long>& source, int cell) {
  if (n.n.size() != set.terms().size()) throw InvalidInput("current size does not match interaction set");
  long long r = source.at(cell);
  for (std::size_t t = 0; t < n.n.size(); ++t) {
    if (n.n[t] == 0) continue;
    for (const auto& [c, v] : set.terms()[t].support) {
      if (c == cell) r += static_cast<long long>(v) * n.n[t];
    }
  }
  return r;
}

bool satisfies_constraints(const InteractionSet& set, const Current& n,
                           const std::vector<long long>& source) {
  if (n.n.size() != set.terms().size()) return false;
  std::vector<long long> r = source;
  for (std::size_t t = 0; t < n.n.size(); ++t) {
    if (n.n[t] < 0) return false;
    for (const auto& [c, v] : set.terms()[t].support) r[c] += static_cast<long long>(v) * n.n[t];
  }
  return std::all_of(r.begin(), r.end(), [](long long x) { return x == 0; });
}

double weight(const InteractionSet& set, const Current& n) {
  if (n.n.size() != set.terms().size()) throw InvalidInput("current size does not match interaction set");
  double w = 1.0;
  for (std::size_t t = 0; t < n.n.size(); ++t) {
    const int k = n.n[t];
    if (k == 0) continue;
    w *= std::exp(k * std::log(set.terms()[t].coupling) - std::lgamma(k + 1.0));
  }
  return w;
}

// --- enumeration ------------------------------------------------------------

namespace {

class Enumerator {
 public:
  using Leaf = std::function<void(const Current&, double, int)>;

  Enumerator(const InteractionSet& set, const std::vector<long long>& source, int M,
             const EnumerationLimits& lim, std::atomic<long long>& visits)
      : set_(set), M_(M), lim_(lim), visits_(visits) {
    const auto& terms = set.terms();
    const std::size_t T = terms.size();
    const std::size_t C = set.cell_count();
    if (source.size() != C) throw InvalidInput("source size does not match interaction set");
    res_ = source;
    fixed_zero_.assign(T, false);
    for (std::size_t t = 0; t < T; ++t) {
      fixed_zero_[t] = lim.skip_zero_coupling && terms[t].coupling == 0.0;
    }
    // Last live term touching each cell closes it.
    std::vector<int> closer(C, -1);
    for (std::size_t t = 0; t < T; ++t) {
      if (fixed_zero_[t]) continue;
      for (const auto& [c, v] : terms[t].support) {
        if (v != 0) closer[c] = static_cast<int>(t);
      }
    }
    closes_.resize(T);
    open_.resize(T);
    for (std::size_t t = 0; t < T; ++t) {
      for (const auto& [c, v] : terms[t].support) {
        if (v == 0) continue;
        if (closer[c] == static_cast<int>(t)) {
          closes_[t].emplace_back(c, v);
        } else {
          int maxrest = 0;
          for (std::size_t u = t + 1; u < T; ++u) {
            if (fixed_zero_[u]) continue;
            for (const auto& [c2, v2] : terms[u].support) {
              if (c2 == c) maxrest = std::max(maxrest, std::abs(v2));
            }
          }
          open_[t].push_back({c, v, maxrest});
        }
      }
    }
    suffix_l1_.assign(T + 1, 0);
    for (std::size_t t = T; t-- > 0;) {
      long long l1 = 0;
      if (!fixed_zero_[t]) {
        for (const auto& [c, v] : terms[t].support) l1 += std::abs(v);
      }
      suffix_l1_[t] = std::max(suffix_l1_[t + 1], l1);
    }
    abs_sum_ = 0;
    feasible_ = true;
    for (std::size_t c = 0; c < C; ++c) {
      abs_sum_ += std::abs(res_[c]);
      if (closer[c] < 0 && res_[c] != 0) feasible_ = false;
    }
    if (abs_sum_ > static_cast<long long>(M) * suffix_l1_[0]) feasible_ = false;
    coupling_pow_.resize(T);
    for (std::size_t t = 0; t < T; ++t) {
      coupling_pow_[t].resize(static_cast<std::size_t>(M) + 1);
      for (int v = 0; v <= M; ++v) {
        coupling_pow_[t][v] =
            v == 0 ? 1.0 : std::exp(v * std::log(terms[t].coupling) - std::lgamma(v + 1.0));
      }
    }
    cur_.n.assign(T, 0);
  }

  /// Runs the search; `first` restricts the value of term 0 when >= 0.
  void run(const Leaf& leaf, int first = -1) {
    if (!feasible_) return;
    first_ = first;
    leaf_ = &leaf;
    dfs(0, M_, 1.0);
  }

  /// Admissible values for term 0 (used to split into branches).
  std::vector<int> first_values() const {
    if (set_.terms().empty()) return {0};
    if (fixed_zero_[0]) return {0};
    std::vector<int> out;
    for (int v = 0; v <= M_; ++v) out.push_back(v);
    return out;
  }

 private:
  struct Open {
    int cell;
    int coef;
    int maxrest;
  };

  bool apply(std::size_t t, int v, int rem_after) {
    for (const auto& [c, coef] : set_.terms()[t].support) {
      abs_sum_ -= std::abs(res_[c]);
      res_[c] += static_cast<long long>(coef) * v;
      abs_sum_ += std::abs(res_[c]);
    }
    for (const auto& [c, coef] : closes_[t]) {
      if (res_[c] != 0) return false;
    }
    for (const Open& o : open_[t]) {
      if (std::abs(res_[o.cell]) > static_cast<long long>(rem_after) * o.maxrest) return false;
    }
    return abs_sum_ <= static_cast<long long>(rem_after) * suffix_l1_[t + 1];
  }

  void undo(std::size_t t, int v) {
    for (const auto& [c, coef] : set_.terms()[t].support) {
      abs_sum_ -= std::abs(res_[c]);
      res_[c] -= static_cast<long long>(coef) * v;
      abs_sum_ += std::abs(res_[c]);
    }
  }

  void try_value(std::size_t t, int v, int rem, double w) {
    const int rem_after = rem - v;
    if (apply(t, v, rem_after)) {
      cur_.n[t] = v;
      dfs(t + 1, rem_after, w * coupling_pow_[t][v]);
      cur_.n[t] = 0;
    }
    undo(t, v);
  }

  void dfs(std::size_t t, int rem, double w) {
    if (visits_.fetch_add(1, std::memory_order_relaxed) >= lim_.max_visits) {
      throw ResourceGuard("current enumeration exceeded the visit cap of " +
                          std::to_string(lim_.max_visits));
    }
    const std::size_t T = set_.terms().size();
    if (t == T) {
      (*leaf_)(cur_, w, M_ - rem);
      return;
    }
    if (t == 0 && first_ >= 0) {
      if (first_ <= rem) try_value(t, first_, rem, w);
      return;
    }
    if (fixed_zero_[t]) {
      try_value(t, 0, rem, w);
      return;
    }
    if (!closes_[t].empty()) {
      const auto [c, coef] = closes_[t].front();
      const long long r = res_[c];
      if (r % coef != 0) return;
      const long long v = -r / coef;
      if (v < 0 || v > rem) return;
      try_value(t, static_cast<int>(v), rem, w);
      return;
    }
    for (int v = 0; v <= rem; ++v) try_value(t, v, rem, w);
  }

  const InteractionSet& set_;
  int M_;
  EnumerationLimits lim_;
  std::atomic<long long>& visits_;
  std::vector<long long> res_;
  long long abs_sum_ = 0;
  bool feasible_ = true;
  std::vector<bool> fixed_zero_;
  std::vector<std::vector<std::pair<int, int>>> closes_;
  std::vector<std::vector<Open>> open_;
  std::vector<long long> suffix_l1_;
  std::vector<std::vector<double>> coupling_pow_;
  Current cur_;
  int first_ = -1;
  const Leaf* leaf_ = nullptr;
};

void check_guard(const InteractionSet& set, int M, const EnumerationLimits& lim) {
  if (M < 0) throw InvalidInput("enumeration budget M must be >= 0");
  const long long load = static_cast<long long>(set.terms().size()) * M;
  if (load > lim.max_terms_times_budget) {
    throw ResourceGuard("enumeration limit exceeded: terms*M = " + std::to_string(load) +
                        " > " + std::to_string(lim.max_terms_times_budget));
  }
}

}  // namespace

void enumerate_currents(const InteractionSet& set, const std::vector<long long>& source, int M,
                        const std::function<void(const Current&)>& visit,
                        const EnumerationLimits& limits) {
  check_guard(set, M, limits);
  std::atomic<long long> visits{0};
  Enumerator en(set, source, M, limits, visits);
  const Enumerator::Leaf leaf = [&](const Current& c, double, int) { visit(c); };
  en.run(leaf);
}

void enumerate_currents_bruteforce(const InteractionSet& set, const std::vector<long long>& source,
                                   int M, const std::function<void(const Current&)>& visit) {
  if (M < 0) throw InvalidInput("enumeration budget M must be >= 0");
  const std::size_t T = set.terms().size();
  if (T > 16) throw ResourceGuard("brute-force enumeration limited to 16 terms");
  Current cur;
  cur.n.assign(T, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t t, int rem) {
    if (t == T) {
      if (satisfies_constraints(set, cur, source)) visit(cur);
      return;
    }
    for (int v = 0; v <= rem; ++v) {
      cur.n[t] = v;
      rec(t + 1, rem - v);
    }
    cur.n[t] = 0;
  };
  rec(0, M);
}

double poisson_tail(double lambda, int M) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidInput("Poisson rate must be >= 0");
  if (M < 0) throw InvalidInput("budget must be >= 0");
  if (lambda == 0.0) return 0.0;
  int t = M + 1;
  double term = std::exp(t * std::log(lambda) - std::lgamma(t + 1.0));
  double sum = 0.0;
  for (int it = 0; it < 100000; ++it, ++t) {
    sum += term;
    const double r = lambda / (t + 1.0);
    const double next = term * r;
    // Ratios keep falling, so a geometric series bounds everything after.
    if (r < 0.5 && next / (1.0 - r) <= 1e-17 * sum) return sum + next / (1.0 - r);
    if (next == 0.0) return sum;
    term = next;
  }
  return sum;
}

WeightedSum partition_sum(const InteractionSet& set, const std::vector<long long>& source, int M,
                          EnumerationLimits limits) {
  check_guard(set, M, limits);
  WeightedSum out;
  out.budget = M;
  out.count_by_level.assign(static_cast<std::size_t>(M) + 1, 0);
  std::atomic<long long> visits{0};

  struct Branch {
    CompensatedSum sum;
    std::uint64_t count = 0;
    std::vector<std::uint64_t> levels;
  };
  Enumerator probe(set, source, M, limits, visits);
  const std::vector<int> firsts = probe.first_values();
  std::vector<Branch> branches(firsts.size());
  for (auto& b : branches) b.levels.assign(static_cast<std::size_t>(M) + 1, 0);

  auto run_branch = [&](std::size_t i) {
    Enumerator en(set, source, M, limits, visits);
    Branch& b = branches[i];
    const Enumerator::Leaf leaf = [&](const Current&, double w, int total) {
      b.sum.add(w);
      ++b.count;
      ++b.levels[total];
    };
    en.run(leaf, firsts[i]);
  };

  const int workers = std::max(1, limits.workers);
  if (workers == 1 || firsts.size() == 1) {
    for (std::size_t i = 0; i < firsts.size(); ++i) run_branch(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i; (i = next.fetch_add(1)) < firsts.size();) run_branch(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  CompensatedSum total;
  for (const Branch& b : branches) {
    total.merge(b.sum);
    out.count += b.count;
    for (std::size_t t = 0; t < b.levels.size(); ++t) out.count_by_level[t] += b.levels[t];
  }
  out.value = total.value();
  out.tail_bound = poisson_tail(set.total_coupling(), M);
  return out;
}

bool divisibility_obstruction(const Chain& gamma, int j, int k) {
  if (gamma.empty()) return false;
  if (gamma.dim() != 1) throw InvalidInput("divisibility check needs a 1-chain");
  const Chain bd = boundary(gamma);
  for (const auto& [v, c] : bd.coeffs()) {
    const long long x = static_cast<long long>(j) * c;
    if (k == 0 ? x != 0 : x % k != 0) return true;
  }
  return false;
}

ExpectationInterval expectation_via_currents(const Complex& cx, const Chain& gamma, int j, int k,
                                             double beta, double kappa, int M,
                                             const EnumerationLimits& limits) {
  if (j < 0) throw InvalidInput("charge j must be >= 0");
  const InteractionSet set = InteractionSet::charge_k(cx, k, beta, kappa);
  EnumerationLimits lim = limits;
  lim.skip_zero_coupling = true;
  ExpectationInterval out;
  out.denominator = partition_sum(set, source_of(set, Chain(1), 0), M, lim);
  const double Dv = out.denominator.value;
  const double Dt = out.denominator.tail_bound;
  if (!(Dv > 0.0)) throw NotConverged("denominator interval contains 0; raise the budget");
  if (divisibility_obstruction(gamma, j, k)) {
    out.exact_zero = true;
    out.numerator.budget = M;
    out.numerator.count_by_level.assign(static_cast<std::size_t>(M) + 1, 0);
    return out;
  }
  out.numerator = partition_sum(set, source_of(set, gamma, j), M, lim);
  const double Nv = out.numerator.value;
  const double Nt = out.numerator.tail_bound;
  out.lower = Nv / (Dv + Dt);
  out.upper = std::min(1.0, (Nv + Nt) / Dv);
  return out;
}

// --- witnesses --------------------------------------------------------------

Current line_witness(const InteractionSet& set, const Chain& gamma, int j) {
  const int k = set.charge();
  if (k < 1) throw InvalidInput("line witness needs a charge-k set with k >= 1");
  if (j % k != 0) throw InvalidInput("line witness needs k | j");
  Current cur;
  cur.n.assign(set.terms().size(), 0);
  for (const auto& [cell, g] : gamma.coeffs()) {
    if (cell.dim != 1) throw InvalidInput("line witness needs a 1-chain");
    const int t = set.find({cell, g > 0 ? -1 : 1});
    if (t < 0) throw InvalidInput("path edge outside the complex");
    cur.n[t] += static_cast<int>((j / k) * std::abs(g));
  }
  return cur;
}

Current surface_witness(const InteractionSet& set, const Chain& gamma, int j) {
  if (gamma.empty() || gamma.dim() != 1) throw InvalidInput("surface witness needs a nonempty loop");
  if (!boundary(gamma).empty()) throw InvalidInput("surface witness needs a closed loop");
  const int m = set.complex().dim();
  Coord lo{}, hi{};
  for (int i = 0; i < m; ++i) {
    lo[i] = 1 << 20;
    hi[i] = -(1 << 20);
  }
  for (const auto& [cell, g] : gamma.coeffs()) {
    for (const Coord& v : cell.vertices()) {
      for (int i = 0; i < m; ++i) {
        lo[i] = std::min(lo[i], v[i]);
        hi[i] = std::max(hi[i], v[i]);
      }
    }
  }
  std::vector<int> axes;
  for (int i = 0; i < m; ++i) {
    if (hi[i] > lo[i]) axes.push_back(i);
  }
  if (axes.size() != 2) throw InvalidInput("surface witness needs a planar loop");
  const int a = axes[0], b = axes[1];
  Chain disc_boundary(1);
  std::vector<Cell> disc;
  for (int x = lo[a]; x < hi[a]; ++x) {
    for (int y = lo[b]; y < hi[b]; ++y) {
      Coord c = lo;
      c[a] = x;
      c[b] = y;
      const Cell p = Cell::plaquette(c, a, b);
      disc.push_back(p);
      for (const OrientedCell& f : faces(p)) disc_boundary.add(f);
    }
  }
  int orient = 0;
  if (gamma == disc_boundary) {
    orient = -1;  // residual boundary(p)(n[p]-n[-p]) + j gamma vanishes with n[-p] = j
  } else if (gamma == -disc_boundary) {
    orient = 1;
  } else {
    throw InvalidInput("surface witness needs an axis-aligned rectangle loop");
  }
  Current cur;
  cur.n.assign(set.terms().size(), 0);
  for (const Cell& p : disc) {
    const int t = set.find({p, orient});
    if (t < 0) throw InvalidInput("rectangle plaquette outside the interaction set");
    cur.n[t] = j;
  }
  return cur;
}

// --- text format ------------------------------------------------------------

std::string to_text(const InteractionSet& set, const Current& n) {
  if (n.n.size() != set.terms().size()) throw InvalidInput("current size does not match interaction set");
  std::vector<std::tuple<Cell, int, int>> rows;
  for (std::size_t t = 0; t < n.n.size(); ++t) {
    if (n.n[t] == 0) continue;
    rows.emplace_back(set.terms()[t].label.cell, set.terms()[t].label.sign, n.n[t]);
  }
  std::sort(rows.begin(), rows.end());
  const int m = set.complex().dim();
  std::ostringstream os;
  for (const auto& [cell, sign, count] : rows) {
    os << cell.dim << ' ';
    for (int i = 0; i < m; ++i) os << (i ? "," : "") << cell.anchor[i];
    os << ' ';
    if (cell.dim == 0) {
      os << '-';
    } else {
      for (int d = 0; d < cell.dim; ++d) os << (d ? "," : "") << cell.dirs[d];
    }
    os << ' ' << (sign > 0 ? "+1" : "-1") << ' ' << count << '\n';
  }
  return os.str();
}

Current from_text(const InteractionSet& set, const std::string& text) {
  Current cur;
  cur.n.assign(set.terms().size(), 0);
  std::istringstream in(text);
  std::string line;
  const int m = set.complex().dim();
  auto split_ints = [](const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    int dim = 0, count = 0;
    std::string anchor, dirs, sign;
    if (!(ls >> dim >> anchor >> dirs >> sign >> count)) throw InvalidInput("malformed current line: " + line);
    try {
      const std::vector<int> xs = split_ints(anchor);
      if (static_cast<int>(xs.size()) != m) throw InvalidInput("anchor has wrong dimension: " + line);
      Cell c{};
      for (int i = 0; i < m; ++i) c.anchor[i] = xs[i];
      c.dim = dim;
      if (dim > 0) {
        const std::vector<int> ds = split_ints(dirs);
        if (static_cast<int>(ds.size()) != dim) throw InvalidInput("dirs do not match dim: " + line);
        for (int d = 0; d < dim; ++d) c.dirs[d] = ds[d];
      }
      if (sign != "+1" && sign != "-1") throw InvalidInput("sign must be +1 or -1: " + line);
      const int t = set.find({c, sign == "+1" ? 1 : -1});
      if (t < 0) throw InvalidInput("cell not in interaction set: " + line);
      if (count < 0) throw InvalidInput("negative occupation: " + line);
      cur.n[t] = count;
    } catch (const std::logic_error& e) {
      if (dynamic_cast<const InvalidInput*>(&e)) throw;
      throw InvalidInput("malformed current line: " + line);
    }
  }
  return cur;
}

// --- confinement bound ------------------------------------------------------

double confinement_a(double beta, double kappa, int j, int k, int m) {
  if (k < 1 || j % k != 0) throw InvalidInput("confinement bound needs k >= 1 and k | j");
  if (m < 1) throw InvalidInput("dimension m must be >= 1");
  if (!(beta >= 0.0) || !(kappa >= 0.0)) throw InvalidInput("couplings must be >= 0");
  const double c = 1.0 + 16.0 * (m - 1);
  return c * c * std::expm1(static_cast<double>(j) / k * beta) * std::exp(4.0 * kappa);
}

BoundReport confinement_lower_bound(double beta, double kappa, int j, int k, int R, int T, int n,
                                    int m) {
  if (R < 1 || T < 1 || n < 1) throw InvalidInput("R, T, n must be >= 1");
  BoundReport rep;
  rep.a = confinement_a(beta, kappa, j, k, m);
  rep.valid = rep.a < 1.0;
  if (rep.valid) {
    const double a = rep.a;
    const double tn = static_cast<double>(T) * n;
    const double rn = static_cast<double>(R) * n;
    rep.lower_bound = 1.0 - 2.0 * a / ((1.0 - a) * (1.0 - a)) - tn * std::pow(a, rn) / (1.0 - a);
  }
  return rep;
}

}  // namespace lhiggs
