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

#include "lhiggs/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <string>

#include "lhiggs/errors.hpp"

namespace lhiggs {
namespace {

Coord shifted(Coord x, int mu, int by = 1) {
  x[mu] += by;
  return x;
}

void check_axis(int mu) {
  if (mu < 0 || mu >= kMaxDim) throw InvalidInput("axis index out of range");
}

// Union-find over small index ranges.
struct Dsu {
  std::vector<int> parent;
  explicit Dsu(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

Cell Cell::vertex(const Coord& x) { return Cell{x, 0, {-1, -1}}; }

Cell Cell::edge(const Coord& x, int mu) {
  check_axis(mu);
  return Cell{x, 1, {mu, -1}};
}

Cell Cell::plaquette(const Coord& x, int mu, int nu) {
  check_axis(mu);
  check_axis(nu);
  if (mu == nu) throw InvalidInput("plaquette needs two distinct axes");
  if (mu > nu) std::swap(mu, nu);
  return Cell{x, 2, {mu, nu}};
}

std::vector<Coord> Cell::vertices() const {
  switch (dim) {
    case 0:
      return {anchor};
    case 1:
      return {anchor, shifted(anchor, dirs[0])};
    default: {
      const Coord a = shifted(anchor, dirs[0]);
      return {anchor, a, shifted(a, dirs[1]), shifted(anchor, dirs[1])};
    }
  }
}

std::uint64_t cell_key(const Cell& c) {
  std::uint64_t k = static_cast<std::uint64_t>(c.dim);
  k = (k << 3) | static_cast<std::uint64_t>(c.dirs[0] + 1);
  k = (k << 3) | static_cast<std::uint64_t>(c.dirs[1] + 1);
  for (int i = 0; i < kMaxDim; ++i) {
    k = (k << 7) | static_cast<std::uint64_t>(c.anchor[i] + 64);
  }
  return k;
}

std::vector<OrientedCell> faces(const Cell& c) {
  if (c.dim == 1) {
    return {{Cell::vertex(shifted(c.anchor, c.dirs[0])), 1},
            {Cell::vertex(c.anchor), -1}};
  }
  if (c.dim == 2) {
    const int mu = c.dirs[0];
    const int nu = c.dirs[1];
    return {{Cell::edge(c.anchor, mu), 1},
            {Cell::edge(shifted(c.anchor, mu), nu), 1},
            {Cell::edge(shifted(c.anchor, nu), mu), -1},
            {Cell::edge(c.anchor, nu), -1}};
  }
  return {};
}

// --- Complex ---------------------------------------------------------------

Complex Complex::box(int m, int N) {
  if (m < 1 || m > kMaxDim) throw InvalidInput("dimension m must be in 1..6");
  if (N < 1 || N > kMaxRadius) throw InvalidInput("box radius N must be in 1..60");
  Complex cx;
  cx.m_ = m;
  const int side = 2 * N + 1;
  std::size_t nv = 1;
  for (int i = 0; i < m; ++i) nv *= static_cast<std::size_t>(side);
  for (std::size_t flat = 0; flat < nv; ++flat) {
    Coord x{};
    std::size_t r = flat;
    for (int i = m - 1; i >= 0; --i) {
      x[i] = static_cast<int>(r % side) - N;
      r /= side;
    }
    cx.cells_[0].push_back(Cell::vertex(x));
    for (int mu = 0; mu < m; ++mu) {
      if (x[mu] == N) continue;
      cx.cells_[1].push_back(Cell::edge(x, mu));
      for (int nu = mu + 1; nu < m; ++nu) {
        if (x[nu] == N) continue;
        cx.cells_[2].push_back(Cell::plaquette(x, mu, nu));
      }
    }
  }
  cx.finalize();
  return cx;
}

Complex Complex::closure(int m, std::span<const Cell> cells) {
  if (m < 1 || m > kMaxDim) throw InvalidInput("dimension m must be in 1..6");
  std::array<std::set<Cell>, 3> acc;
  std::vector<Cell> todo(cells.begin(), cells.end());
  while (!todo.empty()) {
    const Cell c = todo.back();
    todo.pop_back();
    if (c.dim < 0 || c.dim > 2) throw InvalidInput("only cells of dimension <= 2");
    for (int i = 0; i < kMaxDim; ++i) {
      if (i >= m && c.anchor[i] != 0) throw InvalidInput("cell outside dimension");
      if (std::abs(c.anchor[i]) > kMaxRadius) throw InvalidInput("cell outside range");
    }
    for (int d = 0; d < c.dim; ++d) {
      if (c.dirs[d] < 0 || c.dirs[d] >= m) throw InvalidInput("cell direction outside dimension");
    }
    if (!acc[c.dim].insert(c).second) continue;
    for (const OrientedCell& f : faces(c)) todo.push_back(f.cell);
  }
  Complex cx;
  cx.m_ = m;
  for (int d = 0; d < 3; ++d) cx.cells_[d].assign(acc[d].begin(), acc[d].end());
  cx.finalize();
  return cx;
}

void Complex::finalize() {
  for (int d = 0; d < 3; ++d) {
    std::sort(cells_[d].begin(), cells_[d].end());
    index_[d].clear();
    index_[d].reserve(cells_[d].size());
    for (std::size_t i = 0; i < cells_[d].size(); ++i) {
      index_[d].emplace(cell_key(cells_[d][i]), static_cast<int>(i));
    }
  }
  radius_ = 0;
  for (const Cell& v : cells_[0]) {
    for (int i = 0; i < m_; ++i) radius_ = std::max(radius_, std::abs(v.anchor[i]));
  }
  edge_verts_.assign(cells_[1].size(), {-1, -1});
  vert_edges_.assign(cells_[0].size(), {});
  for (std::size_t e = 0; e < cells_[1].size(); ++e) {
    const auto f = faces(cells_[1][e]);
    const int head = index(f[0].cell);
    const int tail = index(f[1].cell);
    edge_verts_[e] = {tail, head};
    vert_edges_[head].push_back({static_cast<int>(e), 1});
    vert_edges_[tail].push_back({static_cast<int>(e), -1});
  }
  edge_plaqs_.assign(cells_[1].size(), {});
  plaq_edges_.assign(cells_[2].size(), {});
  for (std::size_t p = 0; p < cells_[2].size(); ++p) {
    const auto f = faces(cells_[2][p]);
    for (int i = 0; i < 4; ++i) {
      const int e = index(f[i].cell);
      plaq_edges_[p][i] = {e, f[i].sign};
      edge_plaqs_[e].push_back({static_cast<int>(p), f[i].sign});
    }
  }
}

int Complex::find(const Cell& c) const {
  if (c.dim < 0 || c.dim > 2) return -1;
  const auto it = index_[c.dim].find(cell_key(c));
  return it == index_[c.dim].end() ? -1 : it->second;
}

int Complex::index(const Cell& c) const {
  const int i = find(c);
  if (i < 0) throw InvalidInput("cell not in complex");
  return i;
}

// --- Chain -----------------------------------------------------------------

long long Chain::operator[](const Cell& c) const {
  const auto it = coeffs_.find(c);
  return it == coeffs_.end() ? 0 : it->second;
}

void Chain::add(const Cell& c, long long v) {
  if (c.dim != dim_) throw InvalidInput("chain dimension mismatch");
  if (v == 0) return;
  auto [it, fresh] = coeffs_.emplace(c, v);
  if (!fresh) {
    it->second += v;
    if (it->second == 0) coeffs_.erase(it);
  }
}

Chain& Chain::operator+=(const Chain& o) {
  if (o.empty()) return *this;
  if (empty()) dim_ = o.dim_;
  for (const auto& [c, v] : o.coeffs_) add(c, v);
  return *this;
}

Chain& Chain::operator-=(const Chain& o) {
  if (o.empty()) return *this;
  if (empty()) dim_ = o.dim_;
  for (const auto& [c, v] : o.coeffs_) add(c, -v);
  return *this;
}

Chain& Chain::operator*=(long long s) {
  if (s == 0) {
    coeffs_.clear();
    return *this;
  }
  for (auto& [c, v] : coeffs_) v *= s;
  return *this;
}

long long Chain::mass() const {
  long long s = 0;
  for (const auto& [c, v] : coeffs_) s += v < 0 ? -v : v;
  return s;
}

long long pairing(const Chain& a, const Chain& b) {
  const Chain& small = a.support_size() <= b.support_size() ? a : b;
  const Chain& large = &small == &a ? b : a;
  long long s = 0;
  for (const auto& [c, v] : small.coeffs()) s += v * large[c];
  return s;
}

Chain boundary(const Chain& c) {
  if (c.dim() < 1) throw InvalidInput("boundary of a 0-chain");
  Chain out(c.dim() - 1);
  for (const auto& [cell, v] : c.coeffs()) {
    for (const OrientedCell& f : faces(cell)) out.add(f, v);
  }
  return out;
}

Chain boundary(const Chain& c, const Complex& cx) {
  for (const auto& [cell, v] : c.coeffs()) {
    if (!cx.contains(cell)) throw InvalidInput("chain references a cell outside the complex");
  }
  return boundary(c);
}

Chain coboundary(const Chain& c, const Complex& cx) {
  if (c.dim() > 1) throw InvalidInput("coboundary only defined up to 1-chains here");
  Chain out(c.dim() + 1);
  for (const auto& [cell, v] : c.coeffs()) {
    const int i = cx.find(cell);
    if (i < 0) throw InvalidInput("chain references a cell outside the complex");
    if (c.dim() == 0) {
      for (const Incidence& inc : cx.coedges(i)) {
        out.add(cx.cells(1)[inc.index], inc.sign * v);
      }
    } else {
      for (const Incidence& inc : cx.coplaquettes(i)) {
        out.add(cx.cells(2)[inc.index], inc.sign * v);
      }
    }
  }
  return out;
}

// --- Forms -----------------------------------------------------------------

double wrap_angle(double x) {
  constexpr double kPi = std::numbers::pi;
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  if (x >= -kPi && x < kPi) return x;
  double r = std::fmod(x + kPi, kTwoPi);
  if (r < 0) r += kTwoPi;
  r -= kPi;
  // fmod can land exactly on the excluded endpoint after the shift.
  return r >= kPi ? r - kTwoPi : r;
}

double DiffForm::at(const Complex& cx, const OrientedCell& c) const {
  if (c.cell.dim != degree) throw InvalidInput("form degree mismatch");
  return c.sign * values.at(cx.index(c.cell));
}

double DiffForm::evaluate(const Complex& cx, const Chain& c) const {
  if (!c.empty() && c.dim() != degree) throw InvalidInput("form degree mismatch");
  double s = 0.0;
  for (const auto& [cell, v] : c.coeffs()) s += static_cast<double>(v) * values.at(cx.index(cell));
  return s;
}

DiffForm exterior_derivative(const DiffForm& w, const Complex& cx) {
  if (w.degree < 0 || w.degree > 1) throw InvalidInput("exterior derivative needs degree 0 or 1");
  if (w.values.size() != cx.count(w.degree)) throw InvalidInput("form size does not match complex");
  DiffForm out{w.degree + 1, std::vector<double>(cx.count(w.degree + 1))};
  if (w.degree == 0) {
    for (std::size_t e = 0; e < out.values.size(); ++e) {
      const auto& tv = cx.edge_vertices(static_cast<int>(e));
      out.values[e] = wrap_angle(w.values[tv[1]] - w.values[tv[0]]);
    }
  } else {
    for (std::size_t p = 0; p < out.values.size(); ++p) {
      double s = 0.0;
      for (const Incidence& inc : cx.plaquette_edges(static_cast<int>(p))) {
        s += inc.sign * w.values[inc.index];
      }
      out.values[p] = wrap_angle(s);
    }
  }
  return out;
}

// --- Adjacency -------------------------------------------------------------

std::vector<std::vector<int>> adjacency_components(const Complex& cx, int d,
                                                   std::span<const int> cells) {
  if (d < 1 || d > 2) throw InvalidInput("adjacency needs cells of dimension 1 or 2");
  std::vector<int> sorted(cells.begin(), cells.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  Dsu dsu(sorted.size());
  std::unordered_map<int, int> owner;  // boundary face -> first member
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const int c = sorted[i];
    if (c < 0 || static_cast<std::size_t>(c) >= cx.count(d)) {
      throw InvalidInput("cell index outside complex");
    }
    auto visit = [&](int face) {
      auto [it, fresh] = owner.emplace(face, static_cast<int>(i));
      if (!fresh) dsu.unite(it->second, static_cast<int>(i));
    };
    if (d == 2) {
      for (const Incidence& inc : cx.plaquette_edges(c)) visit(inc.index);
    } else {
      for (int v : cx.edge_vertices(c)) visit(v);
    }
  }
  std::map<int, std::vector<int>> groups;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    groups[dsu.find(static_cast<int>(i))].push_back(sorted[i]);
  }
  std::vector<std::vector<int>> out;
  out.reserve(groups.size());
  // Roots are the smallest member of each class, so map order is the
  // required order by smallest cell.
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  return out;
}

// --- Paths -----------------------------------------------------------------

PathChain make_path(Chain c) {
  if (!c.empty() && c.dim() != 1) throw InvalidInput("path must be a 1-chain");
  for (const auto& [cell, v] : c.coeffs()) {
    if (v != 1 && v != -1) throw InvalidInput("path coefficients must be +-1");
  }
  PathChain p;
  if (!c.empty()) {
    const Chain bd = boundary(c);
    if (bd.support_size() > 2) throw InvalidInput("path boundary has more than two vertices");
    long long total = 0;
    for (const auto& [v, coef] : bd.coeffs()) {
      if (coef != 1 && coef != -1) throw InvalidInput("path boundary coefficient not +-1");
      total += coef;
    }
    if (total != 0) throw InvalidInput("path boundary must be end - start");
    // Connectivity of the support through shared vertices.
    std::vector<Cell> edges;
    for (const auto& [cell, v] : c.coeffs()) edges.push_back(cell);
    std::map<Cell, int> vowner;
    Dsu dsu(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
      for (const OrientedCell& f : faces(edges[i])) {
        auto [it, fresh] = vowner.emplace(f.cell, static_cast<int>(i));
        if (!fresh) dsu.unite(it->second, static_cast<int>(i));
      }
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (dsu.find(static_cast<int>(i)) != 0) throw InvalidInput("path support is not connected");
    }
    if (!bd.empty()) {
      Cell start, end;
      for (const auto& [v, coef] : bd.coeffs()) (coef < 0 ? start : end) = v;
      p.endpoints = {start, end};
    }
  }
  p.chain = std::move(c);
  return p;
}

Chain path_through(std::span<const Coord> vertices) {
  Chain c(1);
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    const Coord& a = vertices[i];
    const Coord& b = vertices[i + 1];
    int axis = -1;
    int step = 0;
    for (int k = 0; k < kMaxDim; ++k) {
      const int diff = b[k] - a[k];
      if (diff == 0) continue;
      if (axis >= 0 || (diff != 1 && diff != -1)) {
        throw InvalidInput("consecutive path vertices must be lattice neighbours");
      }
      axis = k;
      step = diff;
    }
    if (axis < 0) throw InvalidInput("repeated vertex in path");
    if (step > 0) {
      c.add(Cell::edge(a, axis), 1);
    } else {
      c.add(Cell::edge(b, axis), -1);
    }
  }
  return c;
}

Chain rectangle_loop(const Coord& corner, int a, int b, int w, int h) {
  if (w < 1 || h < 1) throw InvalidInput("rectangle sides must be >= 1");
  if (a == b) throw InvalidInput("rectangle plane needs two distinct axes");
  std::vector<Coord> vs;
  Coord x = corner;
  vs.push_back(x);
  for (int i = 0; i < w; ++i) vs.push_back(x = shifted(x, a));
  for (int i = 0; i < h; ++i) vs.push_back(x = shifted(x, b));
  for (int i = 0; i < w; ++i) vs.push_back(x = shifted(x, a, -1));
  for (int i = 0; i < h; ++i) vs.push_back(x = shifted(x, b, -1));
  return path_through(vs);
}

MfGeometry mf_geometry(const Complex& cx, int R, int T, int n, int a, int b) {
  if (R < 1 || T < 1 || n < 1) throw InvalidInput("R, T, n must be >= 1");
  const int m = cx.dim();
  if (a < 0 || b < 0 || a >= m || b >= m || a == b) {
    throw InvalidInput("mf_geometry plane axes invalid for this dimension");
  }
  MfGeometry g;
  g.Rn = R * n;
  g.Tn = T * n;
  const int x0 = -(g.Tn / 2);
  Coord start{};
  start[a] = x0;

  std::vector<Coord> lower{start};
  Coord x = start;
  for (int i = 0; i < g.Rn; ++i) lower.push_back(x = shifted(x, b, -1));
  for (int i = 0; i < g.Tn; ++i) lower.push_back(x = shifted(x, a));
  for (int i = 0; i < g.Rn; ++i) lower.push_back(x = shifted(x, b));

  std::vector<Coord> upper{x};
  for (int i = 0; i < g.Rn; ++i) upper.push_back(x = shifted(x, b));
  for (int i = 0; i < g.Tn; ++i) upper.push_back(x = shifted(x, a, -1));
  for (int i = 0; i < g.Rn; ++i) upper.push_back(x = shifted(x, b, -1));

  for (const auto* path : {&lower, &upper}) {
    for (const Coord& v : *path) {
      if (!cx.contains(Cell::vertex(v))) {
        throw InvalidInput("MF rectangle " + std::to_string(g.Tn) + "x" +
                           std::to_string(2 * g.Rn) + " exceeds the complex");
      }
    }
  }
  g.gamma = make_path(path_through(lower));
  g.gamma_prime = make_path(path_through(upper));
  for (const auto* pc : {&g.gamma, &g.gamma_prime}) {
    for (const auto& [cell, v] : pc->chain.coeffs()) {
      if (!cx.contains(cell)) throw InvalidInput("MF path leaves the complex");
    }
  }
  return g;
}

}  // namespace lhiggs
