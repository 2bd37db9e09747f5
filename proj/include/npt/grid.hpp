#pragma once

// Uniform tensor grids in 1-3 dimensions, grid functions and their discrete
// jets. Second derivatives use a fixed wide stencil of integer offsets.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "npt/catalog.hpp"

namespace npt {

using Offset = std::array<int, 3>;

/// Axes, diagonals and knight moves in 2-D (8 directions); axes, face and
/// body diagonals in 3-D (13); the single axis in 1-D.
inline std::vector<Offset> default_stencil(int n) {
  switch (n) {
    case 1: return {{1, 0, 0}};
    case 2: return {{1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {1, -1, 0}, {2, 1, 0}, {1, 2, 0}, {2, -1, 0}, {1, -2, 0}};
    case 3: {
      std::vector<Offset> d{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {1, -1, 0}, {1, 0, 1}, {1, 0, -1}, {0, 1, 1}, {0, 1, -1}};
      for (int b : {1, -1})
        for (int c : {1, -1}) d.push_back({1, b, c});
      return d;
    }
    default: fail(ErrorCode::Unsupported, "grids are 1-, 2- or 3-dimensional, got n=" + std::to_string(n));
  }
}

class Grid {
 public:
  Grid() = default;

  /// Nodes per axis; the spacing must come out the same on every axis.
  Grid(Box box, std::vector<int> dims, std::vector<Offset> dirs = {}) : box_(std::move(box)), dims_(std::move(dims)) {
    const int n = box_.dim();
    if (n < 1 || n > 3 || static_cast<int>(dims_.size()) != n) fail(ErrorCode::DimensionMismatch, "grid needs 1-3 axes matching the box");
    dirs_ = dirs.empty() ? default_stencil(n) : std::move(dirs);
    h_ = (box_.hi(0) - box_.lo(0)) / (dims_[0] - 1);
    for (int d = 0; d < n; ++d) {
      if (dims_[d] < 3) fail(ErrorCode::BadParameters, "at least 3 nodes per axis");
      const double hd = (box_.hi(d) - box_.lo(d)) / (dims_[d] - 1);
      if (!(hd > 0.0) || std::abs(hd - h_) > 1e-9 * h_) fail(ErrorCode::BadParameters, "grid spacing differs between axes");
    }
    layer_ = 1;
    for (const Offset& o : dirs_)
      for (int d = 0; d < 3; ++d) {
        if (d >= n && o[d] != 0) fail(ErrorCode::DimensionMismatch, "stencil offset outside the grid dimension");
        layer_ = std::max(layer_, std::abs(o[d]));
      }
    size_ = 1;
    for (int v : dims_) size_ *= v;
  }

  /// [lo, hi]^n with the given number of nodes per axis.
  static Grid cube(int n, double lo, double hi, int nodes) { return Grid(Box::cube(n, lo, hi), std::vector<int>(n, nodes)); }

  int dim() const { return box_.dim(); }
  int size() const { return size_; }
  double h() const { return h_; }
  int layer() const { return layer_; }
  const Box& box() const { return box_; }
  const std::vector<int>& dims() const { return dims_; }
  const std::vector<Offset>& stencil() const { return dirs_; }

  Offset index(int node) const {
    Offset ix{0, 0, 0};
    for (int d = 0; d < dim(); ++d) {
      ix[d] = node % dims_[d];
      node /= dims_[d];
    }
    return ix;
  }
  int node(const Offset& ix) const {
    int k = 0;
    for (int d = dim() - 1; d >= 0; --d) k = k * dims_[d] + ix[d];
    return k;
  }

  Vec x(int node) const {
    const Offset ix = index(node);
    Vec p(dim());
    for (int d = 0; d < dim(); ++d) p(d) = box_.lo(d) + h_ * ix[d];
    return p;
  }

  /// Number of nodes between this node and the nearest edge.
  int depth(int node) const {
    const Offset ix = index(node);
    int m = dims_[0];
    for (int d = 0; d < dim(); ++d) m = std::min({m, ix[d], dims_[d] - 1 - ix[d]});
    return m;
  }
  /// Nodes outside the boundary layer, where the full stencil fits.
  bool interior(int node) const { return depth(node) >= layer_; }

  /// node + sign * offset, or -1 outside the grid.
  int shift(int node, const Offset& o, int sign = 1) const {
    Offset ix = index(node);
    for (int d = 0; d < dim(); ++d) {
      ix[d] += sign * o[d];
      if (ix[d] < 0 || ix[d] >= dims_[d]) return -1;
    }
    return this->node(ix);
  }

  double offset_length(const Offset& o) const { return std::sqrt(double(o[0] * o[0] + o[1] * o[1] + o[2] * o[2])); }

  Vec direction(const Offset& o) const {
    Vec v(dim());
    for (int d = 0; d < dim(); ++d) v(d) = o[d];
    return v / v.norm();
  }

 private:
  Box box_;
  std::vector<int> dims_;
  std::vector<Offset> dirs_;
  double h_ = 0.0;
  int layer_ = 1;
  int size_ = 0;
};

/// Nodal values on a grid; values in the boundary layer act as Dirichlet data.
struct GridFunction {
  Grid grid;
  std::vector<double> values;

  GridFunction() = default;
  explicit GridFunction(Grid g, double fill = 0.0) : grid(std::move(g)), values(grid.size(), fill) {}

  static GridFunction sample(const Grid& g, const ScalarField& f) {
    GridFunction u(g);
    for (int k = 0; k < g.size(); ++k) u.values[k] = f(g.x(k));
    return u;
  }

  double operator[](int k) const { return values[k]; }
  double& operator[](int k) { return values[k]; }

  double max_abs_diff(const GridFunction& o) const {
    double m = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) m = std::max(m, std::abs(values[k] - o.values[k]));
    return m;
  }
};

/// (u(x + h o) - 2u(x) + u(x - h o)) / (h |o|)^2.
inline double directional_second_difference(const GridFunction& u, int node, const Offset& o) {
  const Grid& g = u.grid;
  const int a = g.shift(node, o, 1), b = g.shift(node, o, -1);
  if (a < 0 || b < 0) fail(ErrorCode::StencilOutOfBounds, "stencil leaves the grid at node " + std::to_string(node));
  const double len = g.h() * g.offset_length(o);
  return (u[a] - 2.0 * u[node] + u[b]) / (len * len);
}

/// The directional second differences over the grid's stencil, in stencil order.
inline std::vector<double> discrete_spectrum(const GridFunction& u, int node) {
  std::vector<double> out;
  out.reserve(u.grid.stencil().size());
  for (const Offset& o : u.grid.stencil()) out.push_back(directional_second_difference(u, node, o));
  return out;
}

/// Value, centered gradient and centered Hessian; exact on quadratics.
inline Jet2 discrete_jet(const GridFunction& u, int node) {
  const Grid& g = u.grid;
  const int n = g.dim();
  if (g.depth(node) < 1) fail(ErrorCode::BoundaryNode, "no centered differences at edge node " + std::to_string(node));
  const double h = g.h();
  Jet2 j = Jet2::zero(n);
  j.r = u[node];
  Mat a = Mat::Zero(n, n);
  for (int d = 0; d < n; ++d) {
    Offset e{0, 0, 0};
    e[d] = 1;
    const double up = u[g.shift(node, e, 1)], dn = u[g.shift(node, e, -1)];
    j.p(d) = (up - dn) / (2.0 * h);
    a(d, d) = (up - 2.0 * u[node] + dn) / (h * h);
    for (int c = 0; c < d; ++c) {
      Offset pp{0, 0, 0}, pm{0, 0, 0};
      pp[d] = 1;
      pp[c] = 1;
      pm[d] = 1;
      pm[c] = -1;
      const double v = (u[g.shift(node, pp, 1)] - u[g.shift(node, pm, 1)] - u[g.shift(node, pm, -1)] + u[g.shift(node, pp, -1)]) / (4.0 * h * h);
      a(d, c) = v;
      a(c, d) = v;
    }
  }
  j.A = SymMat::symmetrize(a);
  return j;
}

}  // namespace npt
