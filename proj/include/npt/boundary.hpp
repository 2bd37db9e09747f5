#pragma once

// Level-set domains {phi <= 0}, second fundamental forms of their boundaries
// and strict pseudoconvexity with respect to a cone subequation.

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "npt/catalog.hpp"

namespace npt {

struct LevelSetDomain {
  std::string label;
  std::function<double(const Vec&)> phi;
  std::function<Vec(const Vec&)> grad;
  std::function<SymMat(const Vec&)> hess;
  Box bbox;

  int dim() const { return bbox.dim(); }
};

/// |x - c|^2 - r^2.
inline LevelSetDomain sphere_domain(int n, double radius = 1.0, Vec center = {}) {
  if (center.size() == 0) center = Vec::Zero(n);
  const Vec lo = center.array() - radius, hi = center.array() + radius;
  return {"sphere",
          [center, radius](const Vec& x) { return (x - center).squaredNorm() - radius * radius; },
          [center](const Vec& x) { return Vec(2.0 * (x - center)); },
          [n](const Vec&) { return 2.0 * SymMat::identity(n); },
          {lo, hi}};
}

/// sum_i x_i^2 / a_i^2 - 1.
inline LevelSetDomain ellipsoid_domain(const Vec& axes) {
  const int n = static_cast<int>(axes.size());
  const Vec inv = axes.array().square().inverse();
  return {"ellipsoid",
          [inv](const Vec& x) { return x.cwiseProduct(x).dot(inv) - 1.0; },
          [inv](const Vec& x) { return Vec(2.0 * x.cwiseProduct(inv)); },
          [inv](const Vec&) {
            std::vector<double> d(inv.data(), inv.data() + inv.size());
            for (double& v : d) v *= 2.0;
            return SymMat::diag(d);
          },
          {-axes, axes}};
}

/// The slab |x_axis| <= w, described near its upper face by x_axis - w.
inline LevelSetDomain slab_face_domain(int n, int axis = 0, double w = 1.0) {
  Vec lo = Vec::Constant(n, -2.0), hi = Vec::Constant(n, 2.0);
  lo(axis) = -w;
  hi(axis) = w;
  return {"slab",
          [axis, w](const Vec& x) { return x(axis) - w; },
          [axis, n](const Vec&) { return Vec(Vec::Unit(n, axis)); },
          [n](const Vec&) { return SymMat::zero(n); },
          {lo, hi}};
}

/// x_1^2 + x_2^2 - 1 in R^3: round in two directions, flat along x_3.
inline LevelSetDomain cylinder_domain() {
  return {"cylinder",
          [](const Vec& x) { return x(0) * x(0) + x(1) * x(1) - 1.0; },
          [](const Vec& x) { return Vec((Vec(3) << 2.0 * x(0), 2.0 * x(1), 0.0).finished()); },
          [](const Vec&) { return SymMat::diag({2.0, 2.0, 0.0}); },
          {Vec::Constant(3, -1.0), Vec::Constant(3, 1.0)}};
}

/// x_3 - x_1^2 + x_2^2 near the origin, a boundary patch with curvatures (2, -2).
inline LevelSetDomain saddle_domain() {
  return {"saddle",
          [](const Vec& x) { return x(2) - x(0) * x(0) + x(1) * x(1); },
          [](const Vec& x) { return Vec((Vec(3) << -2.0 * x(0), 2.0 * x(1), 1.0).finished()); },
          [](const Vec&) { return SymMat::diag({-2.0, 2.0, 0.0}); },
          {Vec::Constant(3, -0.5), Vec::Constant(3, 0.5)}};
}

struct DerivativeReport {
  double grad_error = 0.0;  // max |grad - centered difference| / (1 + |grad|)
  double hess_error = 0.0;
  bool ok(double bound = 1e-5) const { return grad_error <= bound && hess_error <= bound; }
};

/// Compares grad and hess with centered differences of phi at random points of the box.
inline DerivativeReport check_derivatives(const LevelSetDomain& dom, int probes = 32, double h = 1e-4, std::uint64_t seed = kDefaultSeed) {
  Sampler s(seed);
  const int n = dom.dim();
  DerivativeReport rep;
  for (int k = 0; k < probes; ++k) {
    Vec x(n);
    for (int d = 0; d < n; ++d) x(d) = s.uniform(dom.bbox.lo(d), dom.bbox.hi(d));
    const Vec g = dom.grad(x);
    const Mat hs = dom.hess(x).matrix();
    Vec gd(n);
    Mat hd(n, n);
    for (int i = 0; i < n; ++i) {
      const Vec ei = h * Vec::Unit(n, i);
      gd(i) = (dom.phi(x + ei) - dom.phi(x - ei)) / (2.0 * h);
      for (int j = 0; j < n; ++j) {
        const Vec ej = h * Vec::Unit(n, j);
        hd(i, j) = (dom.phi(x + ei + ej) - dom.phi(x + ei - ej) - dom.phi(x - ei + ej) + dom.phi(x - ei - ej)) / (4.0 * h * h);
      }
    }
    rep.grad_error = std::max(rep.grad_error, (g - gd).cwiseAbs().maxCoeff() / (1.0 + g.norm()));
    rep.hess_error = std::max(rep.hess_error, (hs - hd).cwiseAbs().maxCoeff() / (1.0 + hs.cwiseAbs().maxCoeff()));
  }
  return rep;
}

struct BoundaryPointData {
  Vec x;
  Vec e;                  // inward unit normal
  SymMat A;               // second fundamental form, zero on the normal line
  Mat tangent_frame;      // orthonormal basis of e-perp
  Vec curvatures;         // principal curvatures, ascending
};

inline BoundaryPointData boundary_point(const LevelSetDomain& dom, const Vec& x, double tol = 1e-8) {
  const double v = dom.phi(x);
  if (!(std::abs(v) <= tol)) fail(ErrorCode::NotOnBoundary, "phi(x) = " + format_number(v));
  const Vec g = dom.grad(x);
  const double gn = g.norm();
  if (!(gn > 1e-8)) fail(ErrorCode::SingularGradient, "|grad phi| = " + format_number(gn));
  const int n = dom.dim();
  BoundaryPointData bp;
  bp.x = x;
  bp.e = -g / gn;
  Mat basis(n, n);
  basis.col(0) = bp.e;
  // pick the n-1 axes least aligned with e so the QR is well conditioned
  int skip = 0;
  bp.e.cwiseAbs().maxCoeff(&skip);
  for (int i = 0, c = 1; i < n; ++i)
    if (i != skip) basis.col(c++) = Vec::Unit(n, i);
  Eigen::HouseholderQR<Mat> qr(basis);
  const Mat q = qr.householderQ();
  bp.tangent_frame = q.rightCols(n - 1);
  const Mat t = bp.tangent_frame;
  const Mat block = t.transpose() * dom.hess(x).matrix() * t / gn;
  bp.A = SymMat::symmetrize(Mat(t * block * t.transpose()));
  bp.curvatures = eigenvalues(SymMat::symmetrize(block));
  return bp;
}

/// Newton steps along the gradient (descent on phi^2) from a seed point.
inline std::optional<Vec> find_boundary_point(const LevelSetDomain& dom, Vec x, int max_iter = 100, double tol = 1e-12) {
  for (int it = 0; it < max_iter; ++it) {
    const double v = dom.phi(x);
    if (std::abs(v) <= tol) return x;
    const Vec g = dom.grad(x);
    const double g2 = g.squaredNorm();
    if (!(g2 > 1e-16)) return std::nullopt;
    x -= (v / g2) * g;
  }
  return std::abs(dom.phi(x)) <= 1e-8 ? std::optional<Vec>(x) : std::nullopt;
}

inline std::vector<BoundaryPointData> sample_boundary_points(const LevelSetDomain& dom, int count, std::uint64_t seed = kDefaultSeed) {
  Sampler s(seed);
  const int n = dom.dim();
  std::vector<BoundaryPointData> out;
  for (int tries = 0; tries < 20 * count && static_cast<int>(out.size()) < count; ++tries) {
    Vec x(n);
    for (int d = 0; d < n; ++d) x(d) = s.uniform(dom.bbox.lo(d), dom.bbox.hi(d));
    const auto b = find_boundary_point(dom, x);
    if (!b || !dom.bbox.contains(*b, 1e-9)) continue;
    if (dom.grad(*b).norm() <= 1e-8) continue;
    out.push_back(boundary_point(dom, *b));
  }
  return out;
}

struct PseudoconvexVerdict {
  bool strict = false;
  double t0 = 0.0;  // smallest t with A_x + t P_e in Int F (when strict)
};

/// A_x + t P_e in Int F for all t >= t0. Positivity makes membership
/// monotone in t, so one probe at the cap decides and bisection finds t0.
inline PseudoconvexVerdict strict_pseudoconvex_at(const FiberOracle& f, const BoundaryPointData& bp, double t_cap = 1e6,
                                                  double tol = kDefaultTol) {
  const SymMat pe = SymMat::projector(bp.e);
  auto interior = [&](double t) { return f.value(Jet2::hessian(bp.A + t * pe)) > tol; };
  PseudoconvexVerdict v;
  if (!interior(t_cap)) return v;
  v.strict = true;
  if (interior(0.0)) return v;
  double lo = 0.0, hi = t_cap;
  while (hi - lo > tol * (1.0 + hi)) {
    const double mid = 0.5 * (lo + hi);
    if (interior(mid)) hi = mid; else lo = mid;
  }
  v.t0 = hi;
  return v;
}

struct EllipticityReport {
  bool strict = true;
  int checked = 0;
  double worst = std::numeric_limits<double>::infinity();  // smallest value at P_e
  std::optional<Vec> witness;
};

/// P_e in Int F for the coordinate axes and sampled unit directions e.
inline EllipticityReport strict_ellipticity_check(const FiberOracle& f, int n, int directions = 512, std::uint64_t seed = kDefaultSeed,
                                                  double tol = kDefaultTol) {
  Sampler s(seed);
  EllipticityReport rep;
  for (int k = 0; k < n + directions; ++k) {
    const Vec e = k < n ? Vec(Vec::Unit(n, k)) : s.unit_vec(n);
    const double v = f.value(Jet2::hessian(SymMat::projector(e)));
    ++rep.checked;
    if (v < rep.worst) rep.worst = v;
    if (!(v > tol)) {
      rep.strict = false;
      if (!rep.witness) rep.witness = e;
    }
  }
  return rep;
}

/// Orthonormal n x k frames of uniformly random k-planes.
inline std::vector<Mat> sample_planes(int n, int k, int count, std::uint64_t seed = kDefaultSeed) {
  Sampler s(seed);
  std::vector<Mat> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(s.frame(n, k));
  return out;
}

/// Sampled planes pushed into the tangent space, plus the tangent plane
/// spanned by the principal directions of smallest curvature. True iff every
/// tangential plane W has tr(A_x restricted to W) > tol (vacuously true when
/// the planes are too large to be tangential).
inline bool geometric_pseudoconvex_at(const std::vector<Mat>& planes, const BoundaryPointData& bp, double tol = kDefaultTol,
                                      double angle_tol = 1e-6) {
  const int n = static_cast<int>(bp.x.size());
  const Mat t = bp.tangent_frame;
  auto test = [&](const Mat& w) { return trace_on_subspace(bp.A, w, 1e-8) > tol; };
  for (const Mat& w : planes) {
    if (w.cols() > n - 1) continue;
    // tangential within the angular tolerance: no component along e
    if ((bp.e.transpose() * w).cwiseAbs().maxCoeff() < angle_tol) {
      if (!test(w)) return false;
    } else {
      // the tangential plane obtained by projecting W onto e-perp
      Mat pw = w - bp.e * (bp.e.transpose() * w);
      Eigen::HouseholderQR<Mat> qr(pw);
      if (std::abs(qr.matrixQR().diagonal().cwiseAbs().minCoeff()) < 1e-6) continue;
      const Mat q = Mat(qr.householderQ()).leftCols(w.cols());
      if (!test(q)) return false;
    }
  }
  // planes through the principal directions with the smallest curvatures
  const int k = planes.empty() ? 0 : static_cast<int>(planes.front().cols());
  if (k >= 1 && k <= n - 1) {
    Eigen::SelfAdjointEigenSolver<Mat> es(t.transpose() * bp.A.matrix() * t);
    if (!test(t * es.eigenvectors().leftCols(k))) return false;
  }
  return true;
}

}  // namespace npt
