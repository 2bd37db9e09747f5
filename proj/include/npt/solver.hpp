#pragma once

// Wide-stencil monotone schemes, a damped Jacobi Dirichlet solver, and the
// discrete harness around it: Perron envelopes, sup-convolution,
// sub/superharmonic checks, comparison and zero-maximum-principle experiments,
// and the uniform translation probe.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "npt/canonical.hpp"
#include "npt/duality.hpp"

namespace npt {

/// Runs body(begin, end, slot) over [0, count) split into contiguous chunks,
/// slot < threads numbering the chunk.
inline void parallel_for(int count, int threads, const std::function<void(int, int, int)>& body) {
  threads = std::max(1, std::min(threads, count / 64));
  if (threads == 1) {
    body(0, count, 0);
    return;
  }
  std::vector<std::thread> pool;
  const int chunk = (count + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int b = t * chunk, e = std::min(count, b + chunk);
    if (b < e) pool.emplace_back(body, b, e, t);
  }
  for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------------------
// Schemes

/// Index sets of mutually orthogonal stencil directions, one per complete frame.
using Frames = std::vector<std::vector<int>>;

inline Frames orthogonal_frames(const std::vector<Offset>& dirs, int n) {
  auto dot = [](const Offset& a, const Offset& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; };
  Frames out;
  std::vector<int> cur;
  std::function<void(int)> grow = [&](int from) {
    if (static_cast<int>(cur.size()) == n) {
      out.push_back(cur);
      return;
    }
    for (int i = from; i < static_cast<int>(dirs.size()); ++i) {
      bool ok = true;
      for (int j : cur) ok = ok && dot(dirs[i], dirs[j]) == 0;
      if (!ok) continue;
      cur.push_back(i);
      grow(i + 1);
      cur.pop_back();
    }
  };
  grow(0);
  return out;
}

/// Directions, complete orthogonal frames, and for each direction the
/// directions orthogonal to it.
struct StencilGeometry {
  std::vector<Offset> dirs;
  Frames frames;
  std::vector<std::vector<int>> perp;
  std::vector<int> framed;  // directions that belong to some frame

  StencilGeometry() = default;
  StencilGeometry(std::vector<Offset> d, int n) : dirs(std::move(d)), frames(orthogonal_frames(dirs, n)) {
    const int K = static_cast<int>(dirs.size());
    perp.resize(K);
    for (int i = 0; i < K; ++i)
      for (int j = 0; j < K; ++j)
        if (dirs[i][0] * dirs[j][0] + dirs[i][1] * dirs[j][1] + dirs[i][2] * dirs[j][2] == 0) perp[i].push_back(j);
    std::vector<bool> seen(K, false);
    for (const auto& f : frames)
      for (int i : f) seen[i] = true;
    for (int i = 0; i < K; ++i)
      if (seen[i]) framed.push_back(i);
  }
};

/// A discrete operator F_h(x) = phi(second differences along the stencil).
/// phi must be nondecreasing in every argument. bound(w, frames) bounds
/// sum_i w_i dphi/dDelta_i, which fixes the stable step.
struct Scheme {
  std::string label;
  std::function<double(std::span<const double>, const StencilGeometry&)> phi;
  std::function<double(std::span<const double>, const StencilGeometry&)> bound;
};

namespace detail {

inline double max_weight(std::span<const double> w, const StencilGeometry&) { return *std::max_element(w.begin(), w.end()); }

/// Largest frame sum of weights times a per-direction derivative bound.
inline auto frame_weight(double lip) {
  return [lip](std::span<const double> w, const StencilGeometry& geo) {
    double best = 0.0;
    for (const auto& f : geo.frames) {
      double s = 0.0;
      for (int i : f) s += w[i];
      best = std::max(best, lip * s);
    }
    return best;
  };
}

/// Sorted copy of the frame's values into a small buffer.
inline int frame_values(std::span<const double> d, const std::vector<int>& f, double* out) {
  int m = 0;
  for (int i : f) out[m++] = d[i];
  std::sort(out, out + m);
  return m;
}

}  // namespace detail

/// lambda_min: the smallest directional second difference.
inline Scheme scheme_lambda_min() {
  return {"P", [](std::span<const double> d, const StencilGeometry&) { return *std::min_element(d.begin(), d.end()); }, detail::max_weight};
}

inline Scheme scheme_lambda_max() {
  return {"P~", [](std::span<const double> d, const StencilGeometry&) { return *std::max_element(d.begin(), d.end()); }, detail::max_weight};
}

/// lambda_k: the smallest direction for k = 1, the largest for k = n. The
/// middle value in 3-D is min over planes of the max over stencil
/// directions in the plane, planes taken orthogonal to frame directions.
inline Scheme scheme_branch(int k, int n) {
  if (k < 1 || k > n) fail(ErrorCode::IndexOutOfRange, "branch k=" + std::to_string(k) + " for n=" + std::to_string(n));
  const std::string label = "branch:k=" + std::to_string(k);
  if (k == 1) return {label, scheme_lambda_min().phi, detail::max_weight};
  if (k == n) return {label, scheme_lambda_max().phi, detail::max_weight};
  return {label,
          [](std::span<const double> d, const StencilGeometry& geo) {
            double best = std::numeric_limits<double>::infinity();
            for (int t : geo.framed) {
              double top = -std::numeric_limits<double>::infinity();
              for (int i : geo.perp[t]) top = std::max(top, d[i]);
              best = std::min(best, top);
            }
            return best;
          },
          detail::max_weight};
}

/// Canonical p-fold operator: the smallest mean of p second differences
/// taken from one orthogonal frame. p = n gives the Laplacian divided by n.
inline Scheme scheme_pfold(int p, int n) {
  if (p < 1 || p > n) fail(ErrorCode::IndexOutOfRange, "pfold p=" + std::to_string(p) + " for n=" + std::to_string(n));
  return {"pfold:p=" + std::to_string(p),
          [p](std::span<const double> d, const StencilGeometry& geo) {
            double best = std::numeric_limits<double>::infinity();
            double v[3];
            for (const auto& f : geo.frames) {
              detail::frame_values(d, f, v);
              double s = 0.0;
              for (int i = 0; i < p; ++i) s += v[i];
              best = std::min(best, s / p);
            }
            return best;
          },
          detail::frame_weight(1.0 / p)};
}

/// Minimal Pucci operator lam tr A^+ + Lam tr A^- over frames.
inline Scheme scheme_pucci(double lam, double Lam) {
  check_pucci_parameters(lam, Lam);
  return {"pucci:" + format_number(lam) + "," + format_number(Lam),
          [lam, Lam](std::span<const double> d, const StencilGeometry& geo) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& f : geo.frames) {
              double s = 0.0;
              for (int i : f) s += d[i] > 0.0 ? lam * d[i] : Lam * d[i];
              best = std::min(best, s);
            }
            return best;
          },
          detail::frame_weight(Lam)};
}

/// Sum of arctan over the frame, smallest over frames.
inline Scheme scheme_arctan_sum() {
  return {"slag",
          [](std::span<const double> d, const StencilGeometry& geo) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& f : geo.frames) {
              double s = 0.0;
              for (int i : f) s += std::atan(d[i]);
              best = std::min(best, s);
            }
            return best;
          },
          detail::frame_weight(1.0)};
}

/// Precomputed stencil geometry for fast sweeps over one grid.
class SchemeEvaluator {
 public:
  SchemeEvaluator(Scheme scheme, const Grid& grid) : scheme_(std::move(scheme)), grid_(grid) {
    const int n = grid.dim();
    if (grid.stencil().size() > 16) fail(ErrorCode::Unsupported, "at most 16 stencil directions");
    geo_ = StencilGeometry(grid.stencil(), n);
    if (geo_.frames.empty()) fail(ErrorCode::Unsupported, "stencil has no orthogonal frame");
    for (const Offset& o : grid.stencil()) {
      int lin = 0, stride = 1;
      for (int d = 0; d < n; ++d) {
        lin += o[d] * stride;
        stride *= grid.dims()[d];
      }
      offsets_.push_back(lin);
      const double len = grid.h() * grid.offset_length(o);
      weights_.push_back(1.0 / (len * len));
    }
    for (int k = 0; k < grid.size(); ++k)
      if (grid.interior(k)) interior_.push_back(k);
  }

  const Grid& grid() const { return grid_; }
  const Scheme& scheme() const { return scheme_; }
  const StencilGeometry& geometry() const { return geo_; }
  const std::vector<int>& interior() const { return interior_; }

  /// F_h(u) at an interior node.
  double apply(const std::vector<double>& u, int node) const {
    double buf[16];
    const int K = static_cast<int>(offsets_.size());
    for (int i = 0; i < K; ++i) buf[i] = (u[node + offsets_[i]] + u[node - offsets_[i]] - 2.0 * u[node]) * weights_[i];
    return scheme_.phi(std::span<const double>(buf, K), geo_);
  }

  /// 0.9 / (2 sum_theta lip_theta / (h |theta|)^2), the sum running over
  /// the directions one evaluation can read at once.
  double stable_dt() const { return 0.9 / (2.0 * scheme_.bound(weights_, geo_)); }

 private:
  Scheme scheme_;
  Grid grid_;
  StencilGeometry geo_;
  std::vector<int> offsets_;
  std::vector<double> weights_;
  std::vector<int> interior_;
};

// ---------------------------------------------------------------------------
// Dirichlet solver

struct SolveOptions {
  double dt = 0.0;  // <= 0: the stable step
  double tol = 1e-10;
  long max_iter = 100000;
  int threads = 1;
  ScalarField init;  // interior starting values; default: the largest boundary value
};

struct SolveResult {
  GridFunction u;
  std::vector<double> residuals;  // max |F_h(u) - psi| after each sweep
  long iterations = 0;
  double dt = 0.0;
  double residual = 0.0;
};

/// Boundary-layer nodes take g, interior nodes the initial guess.
inline GridFunction dirichlet_start(const SchemeEvaluator& ev, const ScalarField& g, const ScalarField& init) {
  const Grid& grid = ev.grid();
  GridFunction u(grid);
  double top = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < grid.size(); ++k)
    if (!grid.interior(k)) {
      u[k] = g(grid.x(k));
      if (!std::isfinite(u[k])) fail(ErrorCode::BadParameters, "boundary data is not finite at node " + std::to_string(k));
      top = std::max(top, u[k]);
    }
  for (int k : ev.interior()) u[k] = init ? init(grid.x(k)) : top;
  return u;
}

/// Jacobi iteration u <- u + dt (F_h(u) - psi) on interior nodes until the
/// largest residual is at most tol.
inline SolveResult solve_dirichlet(const SchemeEvaluator& ev, const ScalarField& psi, const ScalarField& g, const SolveOptions& opt = {}) {
  const Grid& grid = ev.grid();
  const auto& nodes = ev.interior();
  if (nodes.empty()) fail(ErrorCode::BadParameters, "grid has no interior nodes");
  SolveResult res;
  res.dt = opt.dt > 0.0 ? opt.dt : ev.stable_dt();
  res.u = dirichlet_start(ev, g, opt.init);
  std::vector<double> source(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) source[i] = psi ? psi(grid.x(nodes[i])) : 0.0;
  std::vector<double> cur = res.u.values, next = cur;
  const int threads = std::max(1, opt.threads);
  std::vector<double> partial(threads);
  int growth = 0;
  double prev = std::numeric_limits<double>::infinity();
  for (long it = 0; it < opt.max_iter; ++it) {
    std::fill(partial.begin(), partial.end(), 0.0);
    parallel_for(static_cast<int>(nodes.size()), threads, [&](int b, int e, int slot) {
      double m = 0.0;
      for (int i = b; i < e; ++i) {
        const int k = nodes[i];
        const double r = ev.apply(cur, k) - source[i];
        next[k] = cur[k] + res.dt * r;
        m = std::max(m, std::abs(r));
      }
      partial[slot] = m;
    });
    const double r = *std::max_element(partial.begin(), partial.end());
    res.residuals.push_back(r);
    res.iterations = it + 1;
    res.residual = r;
    if (!std::isfinite(r)) fail(ErrorCode::UnstableStep, "residual is not finite after " + std::to_string(it + 1) + " sweeps");
    growth = r > prev ? growth + 1 : 0;
    if (growth >= 100) fail(ErrorCode::UnstableStep, "residual grew over 100 consecutive sweeps (dt=" + format_number(res.dt) + ")");
    prev = r;
    if (r <= opt.tol) {
      // the residual was measured on cur; keep it rather than the extra step
      res.u.values = cur;
      return res;
    }
    std::swap(cur, next);
  }
  fail(ErrorCode::NotConverged, ev.scheme().label + ": residual " + format_number(res.residual) + " after " + std::to_string(opt.max_iter) + " sweeps");
}

inline SolveResult solve_dirichlet(const Scheme& scheme, const ScalarField& psi, const ScalarField& g, const Grid& grid,
                                   const SolveOptions& opt = {}) {
  return solve_dirichlet(SchemeEvaluator(scheme, grid), psi, g, opt);
}

/// Interior nodes where F_h(u) >= psi - tol (sub) or F_h(u) <= psi + tol (super).
struct SchemeReport {
  long checked = 0;
  long passed = 0;
  double worst = std::numeric_limits<double>::infinity();  // smallest signed margin
  int worst_node = -1;
  bool ok() const { return checked > 0 && checked == passed; }
};

inline SchemeReport scheme_check(const SchemeEvaluator& ev, const GridFunction& u, const ScalarField& psi, bool sub, double tol = 1e-9) {
  SchemeReport rep;
  for (int k : ev.interior()) {
    const double v = ev.apply(u.values, k) - (psi ? psi(u.grid.x(k)) : 0.0);
    const double margin = sub ? v : -v;
    ++rep.checked;
    if (margin >= -tol) ++rep.passed;
    if (margin < rep.worst) {
      rep.worst = margin;
      rep.worst_node = k;
    }
  }
  return rep;
}

/// Finite-difference probe of the update map U(u)_k = u_k + dt (F_h(u)_k - psi):
/// raising any stencil value (the node itself included) never lowers U.
inline CheckReport check_scheme_monotone(const SchemeEvaluator& ev, int states, std::uint64_t seed = kDefaultSeed, double dt = 0.0) {
  Sampler s(seed);
  const Grid& g = ev.grid();
  const double step = dt > 0.0 ? dt : ev.stable_dt();
  CheckReport rep{"scheme-monotone:" + ev.scheme().label};
  rep.seed = seed;
  const auto& nodes = ev.interior();
  for (int t = 0; t < states; ++t) {
    std::vector<double> u(g.size());
    const double scale = s.log_uniform(1e-3, 1e2);
    for (double& v : u) v = scale * s.normal();
    const int k = nodes[s.integer(0, static_cast<int>(nodes.size()) - 1)];
    const auto& dirs = g.stencil();
    const int pick = s.integer(0, 2 * static_cast<int>(dirs.size()));
    const int j = pick == 2 * static_cast<int>(dirs.size()) ? k : g.shift(k, dirs[pick / 2], pick % 2 == 0 ? 1 : -1);
    const double before = u[k] + step * ev.apply(u, k);
    u[j] += scale * s.log_uniform(1e-6, 1.0);
    const double after = u[k] + step * ev.apply(u, k);
    rep.record(after >= before - 1e-12 * (1.0 + std::abs(before)), after - before, Jet2::zero(g.dim()));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Perron envelope and sup-convolution

/// Pointwise maximum of a family lying below g on the boundary layer.
inline GridFunction perron_envelope(const std::vector<GridFunction>& family, const ScalarField& g, double tol = 1e-12) {
  if (family.empty()) fail(ErrorCode::EmptyFamily, "Perron family is empty");
  const Grid& grid = family.front().grid;
  GridFunction env(grid, -std::numeric_limits<double>::infinity());
  for (std::size_t m = 0; m < family.size(); ++m) {
    const auto& w = family[m];
    if (w.grid.size() != grid.size()) fail(ErrorCode::DimensionMismatch, "family members live on different grids");
    for (int k = 0; k < grid.size(); ++k) {
      if (!grid.interior(k)) {
        const double gk = g(grid.x(k));
        if (w[k] > gk + tol * (1.0 + std::abs(gk)))
          fail(ErrorCode::BoundaryViolation, "member " + std::to_string(m) + " exceeds g at boundary node " + std::to_string(k));
      }
      env[k] = std::max(env[k], w[k]);
    }
  }
  return env;
}

/// Affine functions a.x + b, a on a lattice of slopes in [-slope, slope]^n and
/// b the largest value keeping them below g on the boundary layer.
inline std::vector<GridFunction> affine_minorants(const Grid& grid, const ScalarField& g, double slope, int per_axis) {
  const int n = grid.dim();
  std::vector<int> boundary;
  std::vector<double> gb;
  for (int k = 0; k < grid.size(); ++k)
    if (!grid.interior(k)) {
      boundary.push_back(k);
      gb.push_back(g(grid.x(k)));
    }
  std::vector<GridFunction> out;
  int total = 1;
  for (int d = 0; d < n; ++d) total *= per_axis;
  for (int idx = 0; idx < total; ++idx) {
    Vec a(n);
    int rest = idx;
    for (int d = 0; d < n; ++d) {
      a(d) = per_axis == 1 ? 0.0 : -slope + 2.0 * slope * (rest % per_axis) / (per_axis - 1);
      rest /= per_axis;
    }
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < boundary.size(); ++i) b = std::min(b, gb[i] - a.dot(grid.x(boundary[i])));
    out.push_back(GridFunction::sample(grid, [a, b](const Vec& x) { return a.dot(x) + b; }));
  }
  return out;
}

/// u^eps(x) = max over nodes y of u(y) - |y - x|^2 / (2 eps).
inline GridFunction sup_convolution(const GridFunction& u, double eps, int threads = 1) {
  if (!(eps > 0.0)) fail(ErrorCode::BadParameters, "eps must be positive");
  const Grid& g = u.grid;
  std::vector<Vec> xs(g.size());
  for (int k = 0; k < g.size(); ++k) xs[k] = g.x(k);
  GridFunction out(g);
  const double c = 0.5 / eps;
  parallel_for(g.size(), threads, [&](int b, int e, int) {
    for (int k = b; k < e; ++k) {
      double best = -std::numeric_limits<double>::infinity();
      for (int y = 0; y < g.size(); ++y) best = std::max(best, u[y] - c * (xs[y] - xs[k]).squaredNorm());
      out[k] = best;
    }
  });
  return out;
}

/// Smallest second difference of u + |x|^2 / (2 eps) along stencil directions,
/// over nodes where the direction fits. Nonnegative iff u is discretely
/// (1/eps)-quasiconvex.
inline double quasiconvexity_defect(const GridFunction& u, double eps) {
  const Grid& g = u.grid;
  GridFunction w = GridFunction::sample(g, [eps](const Vec& x) { return 0.5 * x.squaredNorm() / eps; });
  for (int k = 0; k < g.size(); ++k) w[k] += u[k];
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < g.size(); ++k)
    for (const Offset& o : g.stencil()) {
      const int a = g.shift(k, o, 1), b = g.shift(k, o, -1);
      if (a < 0 || b < 0) continue;
      const double len = g.h() * g.offset_length(o);
      worst = std::min(worst, (w[a] - 2.0 * w[k] + w[b]) / (len * len));
    }
  return worst;
}

// ---------------------------------------------------------------------------
// Subharmonicity of grid functions

/// The quadratic Q(y) = r + p.(y - x) + (y - x).A(y - x)/2 of a jet outside
/// the fiber with u - Q <= -eps |y - x|^2 near x (equality at x).
struct BadTestJet {
  int node = -1;
  Jet2 jet;
  double eps = 0.0;
  double neighbor_excess = 0.0;  // max over stencil neighbors of u - Q + eps |y - x|^2
};

struct SubharmonicReport {
  long checked = 0;
  long passed = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  int worst_node = -1;
  std::vector<int> failing;
  std::optional<BadTestJet> witness;

  bool ok() const { return checked > 0 && checked == passed; }
};

namespace detail {

inline BadTestJet bad_test_jet(const GridFunction& u, int node, const Jet2& j, const FiberOracle& f, double tol) {
  BadTestJet b;
  b.node = node;
  const int n = j.dim();
  double eps = 1.0;
  Jet2 q = j;
  for (int it = 0; it < 60; ++it, eps *= 0.5) {
    q = j;
    q.A = j.A.shifted(2.0 * eps);
    if (!f.contains(q, tol)) break;
  }
  b.eps = eps;
  b.jet = q;
  const Grid& g = u.grid;
  const Vec x = g.x(node);
  b.neighbor_excess = -std::numeric_limits<double>::infinity();
  for (int d = 0; d < n; ++d)
    for (int s : {1, -1}) {
      Offset o{0, 0, 0};
      o[d] = s;
      const int m = g.shift(node, o);
      if (m < 0) continue;
      const Vec dy = g.x(m) - x;
      const double qv = q.r + q.p.dot(dy) + 0.5 * dy.dot(q.A.matrix() * dy);
      b.neighbor_excess = std::max(b.neighbor_excess, u[m] - qv + eps * dy.squaredNorm());
    }
  return b;
}

}  // namespace detail

/// Classifies the discrete jet at every node of depth >= min_depth against
/// the fiber at that node. The first failure carries a bad test jet.
inline SubharmonicReport check_subharmonic(const GridFunction& u, const std::function<FiberOracle(const Vec&)>& fiber_at,
                                           double tol = kDefaultTol, int min_depth = 1) {
  SubharmonicReport rep;
  const Grid& g = u.grid;
  for (int k = 0; k < g.size(); ++k) {
    if (g.depth(k) < std::max(1, min_depth)) continue;
    const Jet2 j = discrete_jet(u, k);
    const FiberOracle f = fiber_at(g.x(k));
    const double v = f.value(j);
    ++rep.checked;
    const double margin = v;
    if (margin < rep.worst_margin) {
      rep.worst_margin = margin;
      rep.worst_node = k;
    }
    if (classify_value(v, tol).member()) {
      ++rep.passed;
    } else {
      rep.failing.push_back(k);
      if (!rep.witness) rep.witness = detail::bad_test_jet(u, k, j, f, tol);
    }
  }
  return rep;
}

inline SubharmonicReport check_subharmonic(const GridFunction& u, const FiberOracle& f, double tol = kDefaultTol, int min_depth = 1) {
  return check_subharmonic(u, [&f](const Vec&) { return f; }, tol, min_depth);
}

inline SubharmonicReport check_subharmonic(const GridFunction& u, const VariableFiberMap& theta, double tol = kDefaultTol, int min_depth = 1) {
  return check_subharmonic(u, theta.fiber_at, tol, min_depth);
}

/// w is F-superharmonic iff -w is subharmonic for the dual.
inline SubharmonicReport check_superharmonic(const GridFunction& w, const FiberOracle& f, double tol = kDefaultTol, int min_depth = 1) {
  GridFunction neg = w;
  for (double& v : neg.values) v = -v;
  return check_subharmonic(neg, dual(f), tol, min_depth);
}

/// Discrete-jet membership at every node, computed directly.
inline bool pointwise_membership(const GridFunction& u, const FiberOracle& f, double tol = kDefaultTol) {
  for (int k = 0; k < u.grid.size(); ++k)
    if (u.grid.depth(k) >= 1 && !f.contains(discrete_jet(u, k), tol)) return false;
  return true;
}

/// At grid scale the almost-everywhere statement is a tautology: both sides
/// are the same nodewise test. Kept as a guard against drift between them.
inline bool ae_consistency_probe(const GridFunction& u, const FiberOracle& f, double tol = kDefaultTol) {
  return pointwise_membership(u, f, tol) == check_subharmonic(u, f, tol).ok();
}

// ---------------------------------------------------------------------------
// Comparison and the zero maximum principle

struct ComparisonVerdict {
  bool holds = false;
  double max_gap = -std::numeric_limits<double>::infinity();  // max of u - w over interior nodes
  int witness_node = -1;
};

/// Ordering u <= w + slack at nodes of depth >= depth, with the node of largest gap.
inline ComparisonVerdict ordering(const GridFunction& u, const GridFunction& w, int depth, double slack) {
  ComparisonVerdict v;
  for (int k = 0; k < u.grid.size(); ++k) {
    if (u.grid.depth(k) < depth) continue;
    const double gap = u[k] - w[k];
    if (gap > v.max_gap) {
      v.max_gap = gap;
      v.witness_node = k;
    }
  }
  v.holds = v.max_gap <= slack;
  return v;
}

/// u sub, w super for the fiber (discrete jets on nodes of depth >= 1),
/// u <= w on the outer ring; reports the interior ordering.
inline ComparisonVerdict comparison_experiment(const FiberOracle& f, const GridFunction& u_sub, const GridFunction& w_super,
                                               double tol = kDefaultTol) {
  const auto su = check_subharmonic(u_sub, f, tol);
  if (!su.ok()) fail(ErrorCode::HypothesisViolation, "u fails the " + f.label() + " subharmonic check at " + std::to_string(su.checked - su.passed) + " nodes");
  const auto sw = check_superharmonic(w_super, f, tol);
  if (!sw.ok()) fail(ErrorCode::HypothesisViolation, "w fails the " + f.label() + " superharmonic check at " + std::to_string(sw.checked - sw.passed) + " nodes");
  for (int k = 0; k < u_sub.grid.size(); ++k)
    if (u_sub.grid.depth(k) == 0 && u_sub[k] > w_super[k] + tol) fail(ErrorCode::HypothesisViolation, "u > w at boundary node " + std::to_string(k));
  return ordering(u_sub, w_super, 1, tol);
}

/// Scheme version: F_h(u) >= psi and F_h(w) <= psi on interior nodes, u <= w
/// on the boundary layer; reports the interior ordering within slack.
inline ComparisonVerdict scheme_comparison_experiment(const SchemeEvaluator& ev, const ScalarField& psi, const GridFunction& u_sub,
                                                      const GridFunction& w_super, double tol, double slack) {
  if (!scheme_check(ev, u_sub, psi, true, tol).ok()) fail(ErrorCode::HypothesisViolation, "u is not a discrete subsolution");
  if (!scheme_check(ev, w_super, psi, false, tol).ok()) fail(ErrorCode::HypothesisViolation, "w is not a discrete supersolution");
  const Grid& g = ev.grid();
  for (int k = 0; k < g.size(); ++k)
    if (!g.interior(k) && u_sub[k] > w_super[k]) fail(ErrorCode::HypothesisViolation, "u > w at boundary node " + std::to_string(k));
  return ordering(u_sub, w_super, g.layer(), slack);
}

/// A C^2 function strictly subharmonic for a monotonicity cone on a box.
struct StrictApproximator {
  std::string label;
  ScalarField value;
  Vec center;
};

/// Explicit strict approximator for M(gamma, D, R) on a box, if one exists.
/// R = inf: |x - a|^2 / 2 - C with box - a inside Int D. R finite:
/// -sqrt(R^2 - |x - a|^2) - C, which needs box - a inside Int D and the open
/// ball of radius R. The center a slides from the box center against an
/// interior direction of D.
inline std::optional<StrictApproximator> strict_approximator(const MonotonicityCone& m, const Box& box) {
  const int n = box.dim();
  const Vec c = 0.5 * (box.lo + box.hi);
  std::vector<Vec> corners;
  for (int mask = 0; mask < (1 << n); ++mask) {
    Vec x(n);
    for (int d = 0; d < n; ++d) x(d) = (mask >> d) & 1 ? box.hi(d) : box.lo(d);
    corners.push_back(x);
  }
  Vec dir = m.D.interior_point(n);
  if (dir.norm() > 0.0) dir.normalize();
  const double diam = box.diameter();
  auto inside_D = [&](const Vec& a) {
    for (const Vec& x : corners)
      if (!(m.D.value(x - a) > 0.0)) return false;
    return true;
  };
  auto radius = [&](const Vec& a) {
    double r = 0.0;
    for (const Vec& x : corners) r = std::max(r, (x - a).norm());
    return r;
  };
  std::optional<Vec> center;
  for (int i = 0; i <= 4000; ++i) {
    const Vec a = c - (diam * i / 1000.0) * dir;
    if (inside_D(a)) {
      center = a;
      break;
    }
  }
  if (!center) return std::nullopt;
  const Vec a = *center;
  const double rho = radius(a);
  if (m.R.is_infinite()) {
    // r < -gamma |p| needs C > rho^2/2 + gamma rho
    const double C = 0.5 * rho * rho + m.gamma * rho + 1.0;
    return StrictApproximator{"|x - a|^2/2 - C", [a, C](const Vec& x) { return 0.5 * (x - a).squaredNorm() - C; }, a};
  }
  const double R = m.R.value();
  if (!(rho < R)) return std::nullopt;
  const double slope = rho / std::sqrt(R * R - rho * rho);
  const double C = m.gamma * slope + 1.0;
  return StrictApproximator{"-sqrt(R^2 - |x - a|^2) - C", [a, R, C](const Vec& x) { return -std::sqrt(R * R - (x - a).squaredNorm()) - C; }, a};
}

struct ZmpVerdict {
  bool holds = false;
  double max_interior = -std::numeric_limits<double>::infinity();
  int witness_node = -1;
};

/// z subharmonic for the dual cone and z <= 0 on the outer ring; reports
/// whether z <= 0 at every interior node.
inline ZmpVerdict zmp_experiment(const FiberOracle& mtilde, const GridFunction& z, double tol = kDefaultTol) {
  const auto rep = check_subharmonic(z, mtilde, tol);
  if (!rep.ok()) fail(ErrorCode::HypothesisViolation, "z fails the " + mtilde.label() + " check at " + std::to_string(rep.checked - rep.passed) + " nodes");
  const Grid& g = z.grid;
  for (int k = 0; k < g.size(); ++k)
    if (g.depth(k) == 0 && z[k] > tol) fail(ErrorCode::HypothesisViolation, "z > 0 at boundary node " + std::to_string(k));
  ZmpVerdict v;
  for (int k = 0; k < g.size(); ++k) {
    if (g.depth(k) < 1) continue;
    if (z[k] > v.max_interior) {
      v.max_interior = z[k];
      v.witness_node = k;
    }
  }
  v.holds = v.max_interior <= tol;
  return v;
}

/// Seeded candidates for the zero maximum principle: random quadratics and
/// maxima of pairs that pass the check, shifted down to their boundary maximum.
inline std::vector<GridFunction> zmp_samples(const FiberOracle& mtilde, const Grid& grid, int count, std::uint64_t seed = kDefaultSeed,
                                             int max_tries = 20000) {
  Sampler s(seed);
  const int n = grid.dim();
  std::vector<GridFunction> pool, out;
  auto shifted = [&](GridFunction z) {
    double top = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < grid.size(); ++k)
      if (grid.depth(k) == 0) top = std::max(top, z[k]);
    for (double& v : z.values) v -= top;
    return z;
  };
  for (int t = 0; t < max_tries && static_cast<int>(out.size()) < count; ++t) {
    GridFunction z;
    if (pool.size() >= 2 && t % 3 == 2) {
      const auto& a = pool[s.integer(0, static_cast<int>(pool.size()) - 1)];
      const auto& b = pool[s.integer(0, static_cast<int>(pool.size()) - 1)];
      z = a;
      for (int k = 0; k < grid.size(); ++k) z[k] = std::max(a[k], b[k]);
    } else {
      const double scale = s.log_uniform(1e-1, 1e1);
      const SymMat B = s.symmetric(n, scale);
      const Vec p = s.gaussian_vec(n) * scale;
      const double r = s.normal() * scale;
      z = GridFunction::sample(grid, [&](const Vec& x) { return r + p.dot(x) + 0.5 * x.dot(B.matrix() * x); });
    }
    if (!check_subharmonic(z, mtilde).ok()) continue;
    pool.push_back(z);
    z = shifted(std::move(z));
    if (check_subharmonic(z, mtilde).ok()) out.push_back(std::move(z));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Uniform translation probe

struct UtpReport {
  double delta = 0.0;       // every tested translate with |y| < delta passed
  double max_radius = 0.0;  // largest translate tested
  long translates = 0;
  long failures = 0;
  std::optional<Offset> first_failure;  // smallest failing translate, in nodes
  bool all_passed() const { return failures == 0; }
};

/// Checks u(. - y) + theta psi against the fibers on the nodes where the
/// translate still has a discrete jet, for integer node offsets y with
/// |y| <= max_radius. u must pass the check and psi must be strictly
/// subharmonic for the map's monotonicity cone.
inline UtpReport uniform_translation_probe(const GridFunction& u, const VariableFiberMap& fibers, const GridFunction& psi, double theta,
                                           double max_radius, double tol = kDefaultTol) {
  const Grid& g = u.grid;
  const int n = g.dim();
  if (!check_subharmonic(u, fibers, tol).ok()) fail(ErrorCode::HypothesisViolation, "u fails the subharmonic check for " + fibers.label);
  const auto strict = check_subharmonic(psi, cone_M(fibers.monotonicity), tol);
  if (!strict.ok() || !(strict.worst_margin > tol)) fail(ErrorCode::HypothesisViolation, "psi is not strictly subharmonic for " + fibers.monotonicity.key());
  const int reach = static_cast<int>(std::floor(max_radius / g.h() + 1e-9));
  std::vector<std::pair<double, Offset>> offsets;
  for (int a = -reach; a <= reach; ++a)
    for (int b = (n >= 2 ? -reach : 0); b <= (n >= 2 ? reach : 0); ++b)
      for (int c = (n >= 3 ? -reach : 0); c <= (n >= 3 ? reach : 0); ++c) {
        const double len = g.h() * std::sqrt(double(a * a + b * b + c * c));
        if (len > 0.0 && len <= max_radius + 1e-12) offsets.push_back({len, Offset{a, b, c}});
      }
  std::sort(offsets.begin(), offsets.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  UtpReport rep;
  rep.max_radius = max_radius;
  rep.delta = std::numeric_limits<double>::infinity();
  for (const auto& [len, o] : offsets) {
    ++rep.translates;
    // v(x) = u(x - y) + theta psi(x), defined where x - y is on the grid
    GridFunction v(g, std::numeric_limits<double>::quiet_NaN());
    for (int k = 0; k < g.size(); ++k) {
      const int src = g.shift(k, o, -1);
      if (src >= 0) v[k] = u[src] + theta * psi[k];
    }
    bool ok = true;
    for (int k = 0; k < g.size() && ok; ++k) {
      const int src = g.shift(k, o, -1);
      if (g.depth(k) < 1 || src < 0 || g.depth(src) < 1) continue;
      ok = fibers(g.x(k)).contains(discrete_jet(v, k), tol);
    }
    if (!ok) {
      ++rep.failures;
      if (!rep.first_failure) {
        rep.first_failure = o;
        rep.delta = len;
      }
    }
  }
  if (!std::isfinite(rep.delta)) rep.delta = max_radius;
  return rep;
}

}  // namespace npt
