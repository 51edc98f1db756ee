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

// Cubical complexes inside [-N, N]^m: cells up to dimension 2, integer
// chains, angle-valued forms, boundary / coboundary, adjacency and paths.
//
// Cells are stored once, positively oriented, keyed by (anchor, dirs). A
// k-cell with anchor x and dirs {mu < nu} spans x + [0,1]e_mu + [0,1]e_nu.
// Orientation only shows up as the sign of a chain coefficient.

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lhiggs {

inline constexpr int kMaxDim = 6;
inline constexpr int kMaxRadius = 60;

using Coord = std::array<int, kMaxDim>;

struct Cell {
  Coord anchor{};                 // entries past the lattice dimension are 0
  int dim = 0;                    // 0, 1 or 2
  std::array<int, 2> dirs{-1, -1};  // strictly increasing, -1 when unused

  auto operator<=>(const Cell&) const = default;

  static Cell vertex(const Coord& x);
  static Cell edge(const Coord& x, int mu);
  static Cell plaquette(const Coord& x, int mu, int nu);

  /// Vertices spanned by the cell (1, 2 or 4 of them).
  std::vector<Coord> vertices() const;
};

std::uint64_t cell_key(const Cell& c);

struct OrientedCell {
  Cell cell;
  int sign = 1;

  OrientedCell operator-() const { return {cell, -sign}; }
  bool operator==(const OrientedCell&) const = default;
};

/// Signed faces of a cell: d(edge x,mu) = v(x+mu) - v(x) and
/// d(plaq x,mu,nu) = e(x,mu) + e(x+mu,nu) - e(x+nu,mu) - e(x,nu).
std::vector<OrientedCell> faces(const Cell& c);

struct Incidence {
  int index = -1;
  int sign = 0;
};

class Complex {
 public:
  /// Full complex of 0-, 1- and 2-cells of [-N, N]^m.
  static Complex box(int m, int N);

  /// Smallest boundary-closed complex containing the given cells.
  static Complex closure(int m, std::span<const Cell> cells);

  int dim() const { return m_; }
  /// Largest |coordinate| over all vertices.
  int radius() const { return radius_; }

  const std::vector<Cell>& cells(int d) const { return cells_.at(d); }
  std::size_t count(int d) const { return cells_.at(d).size(); }

  /// Index of a positive cell, or -1 if absent.
  int find(const Cell& c) const;
  /// As find(), but throws InvalidInput when the cell is missing.
  int index(const Cell& c) const;
  bool contains(const Cell& c) const { return find(c) >= 0; }

  /// For a 1-cell, the 2-cells containing it with their incidence sign.
  std::span<const Incidence> coplaquettes(int edge) const {
    return edge_plaqs_[edge];
  }
  /// Signed boundary edges of a 2-cell, in the order of faces().
  const std::array<Incidence, 4>& plaquette_edges(int p) const {
    return plaq_edges_[p];
  }
  /// {tail, head} vertex indices of an edge.
  const std::array<int, 2>& edge_vertices(int e) const { return edge_verts_[e]; }
  /// Edges touching a vertex, signed as in the coboundary (+1 if head).
  std::span<const Incidence> coedges(int v) const { return vert_edges_[v]; }

 private:
  void finalize();

  int m_ = 0;
  int radius_ = 0;
  std::array<std::vector<Cell>, 3> cells_;
  std::array<std::unordered_map<std::uint64_t, int>, 3> index_;
  std::vector<std::vector<Incidence>> edge_plaqs_;
  std::vector<std::array<Incidence, 4>> plaq_edges_;
  std::vector<std::array<int, 2>> edge_verts_;
  std::vector<std::vector<Incidence>> vert_edges_;
};

/// Integer chain over positively oriented cells of one dimension; a negative
/// coefficient encodes the reversed orientation.
class Chain {
 public:
  Chain() = default;
  explicit Chain(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  const std::map<Cell, long long>& coeffs() const { return coeffs_; }
  bool empty() const { return coeffs_.empty(); }
  std::size_t support_size() const { return coeffs_.size(); }

  long long operator[](const Cell& c) const;
  void add(const Cell& c, long long v);
  void add(const OrientedCell& c, long long v = 1) { add(c.cell, c.sign * v); }

  Chain& operator+=(const Chain& o);
  Chain& operator-=(const Chain& o);
  Chain& operator*=(long long s);
  friend Chain operator+(Chain a, const Chain& b) { return a += b; }
  friend Chain operator-(Chain a, const Chain& b) { return a -= b; }
  friend Chain operator*(long long s, Chain a) { return a *= s; }
  Chain operator-() const { return -1 * *this; }
  bool operator==(const Chain&) const = default;

  /// Sum of |coefficients|.
  long long mass() const;

 private:
  int dim_ = 0;
  std::map<Cell, long long> coeffs_;
};

/// Coefficient pairing over positive cells.
long long pairing(const Chain& a, const Chain& b);

/// Boundary computed from cell geometry alone.
Chain boundary(const Chain& c);
/// Boundary with membership checks against the complex.
Chain boundary(const Chain& c, const Complex& cx);
/// Adjoint of boundary with respect to pairing(), restricted to the complex.
Chain coboundary(const Chain& c, const Complex& cx);

/// Reduces an angle to [-pi, pi).
double wrap_angle(double x);

/// Angle-valued form on the positive cells of one dimension of a complex,
/// indexed like Complex::cells(degree).
struct DiffForm {
  int degree = 0;
  std::vector<double> values;

  /// omega(c) for an oriented cell; -omega(c) for the reversed one.
  double at(const Complex& cx, const OrientedCell& c) const;
  /// Unwrapped linear evaluation on a chain.
  double evaluate(const Complex& cx, const Chain& c) const;
};

/// d(omega)(c) = omega(boundary c), wrapped to [-pi, pi).
DiffForm exterior_derivative(const DiffForm& w, const Complex& cx);

/// Connected components of a set of cells of one dimension (d >= 1), where
/// two cells are adjacent when their boundary supports intersect. Each
/// component is sorted and components are ordered by their smallest cell.
std::vector<std::vector<int>> adjacency_components(const Complex& cx, int d,
                                                   std::span<const int> cells);

struct PathChain {
  Chain chain;
  std::vector<Cell> endpoints;  // empty for a loop, else {start, end}

  bool is_loop() const { return endpoints.empty(); }
  std::size_t length() const { return chain.support_size(); }
};

/// Validates a 1-chain as a path (coefficients +-1, connected support,
/// boundary a difference of at most two vertices). Throws InvalidInput.
PathChain make_path(Chain c);

/// Path through consecutive lattice neighbours.
Chain path_through(std::span<const Coord> vertices);

/// Counter-clockwise rectangle loop in plane (a, b) with lower-left corner
/// `corner`, extent w along a and h along b.
Chain rectangle_loop(const Coord& corner, int a, int b, int w, int h);

struct MfGeometry {
  PathChain gamma;
  PathChain gamma_prime;
  int Rn = 0;
  int Tn = 0;
};

/// Two U-shaped paths forming a rectangle of width T*n and height 2*R*n in
/// plane (a, b), centred at the origin. gamma runs below the axis from
/// x_n = (-floor(Tn/2), 0) to y_n = x_n + Tn e_a; gamma_prime returns above.
MfGeometry mf_geometry(const Complex& cx, int R, int T, int n, int a = 0,
                       int b = 1);

}  // namespace lhiggs
