#pragma once

// Catalog of subequation fibers: constant-coefficient cones in S(n) and
// R x S(n), the monotonicity family, and variable-coefficient fiber maps
// built from example equations, plus the sampled fiberegularity probe.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "npt/fiber.hpp"
#include "npt/format.hpp"
#include "npt/monotonicity.hpp"
#include "npt/random.hpp"

namespace npt {

// ---------------------------------------------------------------------------
// Spectral helpers

/// sigma_k of the entries of lambda (sigma_0 = 1).
inline double elementary_symmetric(const Vec& lambda, int k) {
  const int n = static_cast<int>(lambda.size());
  if (k < 0 || k > n) return 0.0;
  std::vector<double> e(k + 1, 0.0);
  e[0] = 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::min(i + 1, k); j >= 1; --j) e[j] += lambda(i) * e[j - 1];
  return e[k];
}

/// True iff sigma_j(lambda + s) > 0 for j = 1..k, i.e. lambda + s*1 lies in the open cone Gamma_k.
inline bool in_open_gamma(const Vec& lambda, int k, double s) {
  const Vec shifted = lambda.array() + s;
  for (int j = 1; j <= k; ++j)
    if (!(elementary_symmetric(shifted, j) > 0.0)) return false;
  return true;
}

/// -inf{ s : lambda + s*1 in Gamma_k }. Gamma_k + (positive cone) is contained
/// in Gamma_k, so membership along the shift is monotone and bisection applies.
/// Nonnegative exactly on the closed cone.
inline double gamma_shift_value(const Vec& lambda, int k) {
  // At s = -lambda_max, sigma_1 <= 0 (outside); just above -lambda_min every entry is positive (inside).
  double lo = -lambda.maxCoeff();
  double hi = -lambda.minCoeff() + 1e-14 * (1.0 + lambda.cwiseAbs().maxCoeff());
  if (in_open_gamma(lambda, k, lo)) return -lo;
  for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (in_open_gamma(lambda, k, mid)) hi = mid; else lo = mid;
  }
  return -hi;
}

/// Standard complex structure on R^{2n} = C^n, J(x, y) = (-y, x).
inline Mat complex_structure(int two_n) {
  if (two_n % 2 != 0) fail(ErrorCode::OddDimension, "complex structure needs an even dimension, got " + std::to_string(two_n));
  const int n = two_n / 2;
  Mat j = Mat::Zero(two_n, two_n);
  for (int i = 0; i < n; ++i) {
    j(n + i, i) = 1.0;
    j(i, n + i) = -1.0;
  }
  return j;
}

/// The nonnegative eigenvalues mu_1 >= ... >= mu_n of the skew-Hermitian part
/// (A + JAJ)/2 of A in S(2n); its spectrum is {+-mu_j}.
inline Vec skew_hermitian_mus(const SymMat& a) {
  const Mat j = complex_structure(a.dim());
  const SymMat skew = SymMat::symmetrize(Mat(0.5 * (a.matrix() + j * a.matrix() * j)));
  const Vec ev = eigenvalues(skew);
  const int n = a.dim() / 2;
  Vec mu(n);
  for (int i = 0; i < n; ++i) mu(i) = std::max(0.0, 0.5 * (ev(a.dim() - 1 - i) - ev(i)));
  return mu;
}

/// 0.5 tr A - mu_1 - ... - mu_n.
inline double lagrangian_value(const SymMat& a) { return 0.5 * a.trace() - skew_hermitian_mus(a).sum(); }

/// Orthonormal 2n x n frames spanning Lagrangian planes U(R^n), U unitary
/// (Haar, fixed seed). Used as a sampling oracle for the polar of LAG.
inline std::vector<Mat> sample_lagrangian_frames(int two_n, int count, std::uint64_t seed = kDefaultSeed) {
  if (two_n % 2 != 0) fail(ErrorCode::OddDimension, "Lagrangian frames need an even dimension");
  const int n = two_n / 2;
  Sampler s(seed);
  std::vector<Mat> frames;
  frames.reserve(count);
  using CMat = Eigen::MatrixXcd;
  for (int c = 0; c < count; ++c) {
    CMat g(n, n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) g(i, k) = {s.normal(), s.normal()};
    Eigen::HouseholderQR<CMat> qr(g);
    CMat u = qr.householderQ();
    Mat w(two_n, n);
    w.topRows(n) = u.real();
    w.bottomRows(n) = u.imag();
    frames.push_back(w);
  }
  return frames;
}

// ---------------------------------------------------------------------------
// Constant-coefficient cones

/// P = {A : lambda_min(A) >= 0}; functional lambda_1.
inline FiberOracle cone_P() {
  return FiberOracle(Arity::PureSecondOrder, "P", "lambda_min(A) >= 0", [](const Jet2& j) { return lambda_min(j.A); });
}

/// The subaffine cone {A : lambda_max(A) >= 0}; functional lambda_n.
inline FiberOracle cone_P_dual() {
  return FiberOracle(Arity::PureSecondOrder, "P~", "lambda_max(A) >= 0", [](const Jet2& j) { return lambda_max(j.A); });
}

/// Branch {A : lambda_k(A) >= 0}; k is 1-based and checked against the jet dimension.
inline FiberOracle branch(int k) {
  if (k < 1 || k > kMaxDim) fail(ErrorCode::IndexOutOfRange, "branch index " + std::to_string(k));
  return FiberOracle(Arity::PureSecondOrder, "branch:k=" + std::to_string(k), "lambda_" + std::to_string(k) + "(A) >= 0",
                     [k](const Jet2& j) {
                       if (k > j.dim()) fail(ErrorCode::IndexOutOfRange, "branch k=" + std::to_string(k) + " exceeds n=" + std::to_string(j.dim()));
                       return eigenvalues(j.A)(k - 1);
                     });
}

/// {A : lambda_1 + ... + lambda_p >= 0}, the polar of the Grassmannian G(p, R^n).
inline FiberOracle cone_pfold(int p) {
  if (p < 1 || p > kMaxDim) fail(ErrorCode::IndexOutOfRange, "pfold p=" + std::to_string(p));
  return FiberOracle(Arity::PureSecondOrder, "pfold:p=" + std::to_string(p), "lambda_1 + ... + lambda_" + std::to_string(p) + " >= 0",
                     [p](const Jet2& j) {
                       if (p > j.dim()) fail(ErrorCode::IndexOutOfRange, "pfold p=" + std::to_string(p) + " exceeds n=" + std::to_string(j.dim()));
                       return eigenvalues(j.A).head(p).sum();
                     });
}

/// Closed Garding cone Sigma_k of sigma_k. The functional is the shift value
/// -inf{s : A + sI in Gamma_k}, so closure membership follows the shift rule.
inline FiberOracle cone_sigma_k(int k) {
  if (k < 1 || k > kMaxDim) fail(ErrorCode::IndexOutOfRange, "sigma k=" + std::to_string(k));
  return FiberOracle(Arity::PureSecondOrder, "sigma:k=" + std::to_string(k),
                     "A + sI in Gamma_" + std::to_string(k) + " for all s > 0 (sigma_j(lambda) > 0, j <= " + std::to_string(k) + ")",
                     [k](const Jet2& j) {
                       if (k > j.dim()) fail(ErrorCode::IndexOutOfRange, "sigma k=" + std::to_string(k) + " exceeds n=" + std::to_string(j.dim()));
                       return gamma_shift_value(eigenvalues(j.A), k);
                     });
}

/// lam tr A^+ + Lam tr A^- evaluated on eigenvalues.
inline double pucci_value(const Vec& lambda, double lam, double Lam) {
  double v = 0.0;
  for (int i = 0; i < lambda.size(); ++i) v += lambda(i) > 0.0 ? lam * lambda(i) : Lam * lambda(i);
  return v;
}

inline void check_pucci_parameters(double lam, double Lam) {
  if (!(lam > 0.0) || !(Lam > lam) || !std::isfinite(Lam))
    fail(ErrorCode::BadParameters, "Pucci parameters need 0 < lam < Lam, got " + format_number(lam) + ", " + format_number(Lam));
}

/// Pucci cone {A : lam tr A^+ + Lam tr A^- >= 0}.
inline FiberOracle cone_pucci(double lam, double Lam) {
  check_pucci_parameters(lam, Lam);
  return FiberOracle(Arity::PureSecondOrder, "pucci:" + format_number(lam) + "," + format_number(Lam),
                     format_number(lam) + " tr A^+ + " + format_number(Lam) + " tr A^- >= 0",
                     [lam, Lam](const Jet2& j) { return pucci_value(eigenvalues(j.A), lam, Lam); });
}

/// P_lambda = {A : A + lambda I >= 0}.
inline FiberOracle cone_quasiconvex(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) fail(ErrorCode::BadParameters, "quasiconvexity constant must be >= 0");
  return FiberOracle(Arity::PureSecondOrder, "quasiconvex:lambda=" + format_number(lambda), "lambda_min(A) + " + format_number(lambda) + " >= 0",
                     [lambda](const Jet2& j) { return lambda_min(j.A) + lambda; });
}

/// Lagrangian cone on S(2n): 0.5 tr A - mu_1 - ... - mu_n >= 0.
inline FiberOracle cone_lagrangian() {
  return FiberOracle(Arity::PureSecondOrder, "lagrangian", "0.5 tr A - mu_1 - ... - mu_n >= 0 (mu: skew-Hermitian eigenvalues)",
                     [](const Jet2& j) { return lagrangian_value(j.A); });
}

/// Q = N x P = {r <= 0 and A >= 0}.
inline FiberOracle cone_Q() {
  return FiberOracle(Arity::GradientFree, "Q", "r <= 0 and lambda_min(A) >= 0",
                     [](const Jet2& j) { return std::min(-j.r, lambda_min(j.A)); });
}

/// Q~ = {r <= 0 or A in P~}.
inline FiberOracle cone_Q_dual() {
  return FiberOracle(Arity::GradientFree, "Q~", "r <= 0 or lambda_max(A) >= 0",
                     [](const Jet2& j) { return std::max(-j.r, lambda_max(j.A)); });
}

/// M_alpha(p, A) = A + |p|^((alpha-1)/n) (P_{p-perp} + alpha P_p), M(0, A) = A.
inline SymMat failure_matrix(const Vec& p, const SymMat& a, double alpha) {
  const double pn = p.norm();
  if (pn == 0.0) return a;
  const int n = a.dim();
  const SymMat pp = SymMat::projector(p);
  const SymMat perp = SymMat::identity(n) - pp;
  return a + std::pow(pn, (alpha - 1.0) / n) * (perp + alpha * pp);
}

enum class Extremal { Min, Max };

/// The (p, A) fibers {lambda_min(M_alpha(p,A)) >= 0} / {lambda_max(...) >= 0}.
inline FiberOracle fiber_failure_example(double alpha, Extremal which) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) fail(ErrorCode::BadAlpha, "alpha must exceed 1, got " + format_number(alpha));
  const bool mn = which == Extremal::Min;
  return FiberOracle(Arity::GradientHessian, "failure:alpha=" + format_number(alpha) + ",which=" + (mn ? "min" : "max"),
                     std::string(mn ? "lambda_min" : "lambda_max") + "(A + |p|^((alpha-1)/n)(P_perp + alpha P_p)) >= 0",
                     [alpha, mn](const Jet2& j) {
                       const Vec ev = eigenvalues(failure_matrix(j.p, j.A, alpha));
                       return mn ? ev(0) : ev(ev.size() - 1);
                     });
}

// ---------------------------------------------------------------------------
// Variable-coefficient fibers

struct Box {
  Vec lo;
  Vec hi;

  static Box cube(int n, double a, double b) { return {Vec::Constant(n, a), Vec::Constant(n, b)}; }
  int dim() const { return static_cast<int>(lo.size()); }
  double diameter() const { return (hi - lo).norm(); }
  bool contains(const Vec& x, double slack = 0.0) const {
    for (int i = 0; i < dim(); ++i)
      if (x(i) < lo(i) - slack || x(i) > hi(i) + slack) return false;
    return true;
  }
};

using ScalarField = std::function<double(const Vec&)>;
using MatrixField = std::function<SymMat(const Vec&)>;

/// x -> F_x together with the monotonicity cone and the reference jet
/// J0 in Int M used by the fiberegularity inclusion F_x + eta J0 in F_y.
struct VariableFiberMap {
  std::string label;
  Box domain;
  std::function<FiberOracle(const Vec&)> fiber_at;
  MonotonicityCone monotonicity;
  Jet2 reference_jet;

  FiberOracle operator()(const Vec& x) const { return fiber_at(x); }
};

/// Constant map x -> F with M = M(0, R^n, inf) and J0 = (-1, 0, I).
inline VariableFiberMap constant_fiber_map(FiberOracle f, Box domain) {
  const int n = domain.dim();
  MonotonicityCone m;
  return {f.label(), std::move(domain), [f](const Vec&) { return f; }, m, m.interior_jet(n)};
}

/// Perturbed Monge-Ampere: A + M(x) >= 0 and det(A + M(x)) - f(x) >= 0.
/// Functional min(lambda_min(A + M(x)), det(A + M(x)) - f(x)).
inline VariableFiberMap fiber_perturbed_MA(MatrixField mfield, ScalarField f, Box domain) {
  const int n = domain.dim();
  MonotonicityCone m;
  auto at = [mfield, f](const Vec& x) {
    const double fx = f(x);
    if (fx < 0.0) fail(ErrorCode::NegativeSource, "f(x) = " + format_number(fx) + " < 0");
    const SymMat mx = mfield(x);
    return FiberOracle(Arity::PureSecondOrder, "perturbed-ma", "A + M(x) >= 0 and det(A + M(x)) >= f(x)",
                       [mx, fx](const Jet2& j) {
                         const Vec ev = eigenvalues(j.A + mx);
                         return std::min(ev(0), ev.prod() - fx);
                       });
  };
  return {"perturbed-ma", std::move(domain), at, m, m.interior_jet(n)};
}

/// The special phase values theta_k = (n - 2k) pi / 2, k = 0..n.
inline double special_phase(int n, int k) { return (n - 2 * k) * std::numbers::pi / 2.0; }

struct PhaseInterval {
  int k = 0;             // theta in I_k = (theta_k, theta_{k-1}), 1 <= k <= n
  bool special = false;  // theta equals some theta_k, 1 <= k <= n-1 (within tol)
};

inline PhaseInterval phase_interval(double theta, int n, double tol = 1e-12) {
  const double half = n * std::numbers::pi / 2.0;
  if (!(std::abs(theta) < half)) fail(ErrorCode::PhaseOutOfRange, "phase " + format_number(theta) + " outside (-n pi/2, n pi/2)");
  PhaseInterval out;
  for (int k = 1; k <= n; ++k) {
    if (theta > special_phase(n, k) - tol) {
      out.k = k;
      break;
    }
  }
  for (int k = 1; k <= n - 1; ++k)
    if (std::abs(theta - special_phase(n, k)) <= tol) out.special = true;
  return out;
}

/// Sum_k arctan(lambda_k(A)).
inline double arctan_sum(const SymMat& a) {
  const Vec ev = eigenvalues(a);
  double s = 0.0;
  for (int i = 0; i < ev.size(); ++i) s += std::atan(ev(i));
  return s;
}

/// Special Lagrangian fibers {A : Sum arctan lambda_k(A) >= theta(x)}.
inline VariableFiberMap fiber_special_lagrangian(ScalarField theta, Box domain) {
  const int n = domain.dim();
  MonotonicityCone m;
  auto at = [theta, n](const Vec& x) {
    const double t = theta(x);
    phase_interval(t, n);
    return FiberOracle(Arity::PureSecondOrder, "slag", "Sum arctan lambda_k(A) >= theta(x)",
                       [t](const Jet2& j) { return arctan_sum(j.A) - t; });
  };
  return {"slag", std::move(domain), at, m, m.interior_jet(n)};
}

/// Hyperbolic affine sphere, gradient-free: r <= 0, A >= 0, (-r)^(n+2) det A >= f(x).
inline VariableFiberMap fiber_affine_sphere(ScalarField f, Box domain) {
  const int n = domain.dim();
  MonotonicityCone m;  // Q = N x P with J0 = (-1, 0, I)
  auto at = [f, n](const Vec& x) {
    const double fx = f(x);
    if (fx < 0.0) fail(ErrorCode::NegativeSource, "f(x) = " + format_number(fx) + " < 0");
    return FiberOracle(Arity::GradientFree, "affine-sphere", "r <= 0, A >= 0, (-r)^(n+2) det A >= f(x)",
                       [fx, n](const Jet2& j) {
                         const Vec ev = eigenvalues(j.A);
                         const double mr = std::max(-j.r, 0.0);
                         return std::min({-j.r, ev(0), std::pow(mr, n + 2) * ev.prod() - fx});
                       });
  };
  return {"affine-sphere", std::move(domain), at, m, m.interior_jet(n)};
}

using GradientField = std::function<double(const Vec&)>;

struct DirectionalityReport {
  int checked = 0;
  int violations = 0;
  std::optional<std::pair<Vec, Vec>> witness;  // (p, q) with g(p + q) < g(p)
};

/// Samples g(p + q) >= g(p) for p, q in D.
inline DirectionalityReport check_directionality(const GradientField& g, const DirectionalCone& d, int n, int samples,
                                                 std::uint64_t seed = kDefaultSeed, double tol = 1e-12) {
  Sampler s(seed);
  DirectionalityReport rep;
  auto draw = [&]() {
    for (;;) {
      Vec p = s.uniform(0.0, 2.0) * s.unit_vec(n);
      if (d.value(p) >= 0.0) return p;
      // reflect into the cone by taking absolute values on the constrained axes
      Vec q = p.cwiseAbs();
      if (d.value(q) >= 0.0) return q;
      Vec r = -q;
      if (d.value(r) >= 0.0) return r;
    }
  };
  for (int i = 0; i < samples; ++i) {
    const Vec p = draw();
    const Vec q = draw();
    ++rep.checked;
    if (g(p + q) < g(p) - tol * (1.0 + std::abs(g(p)))) {
      ++rep.violations;
      if (!rep.witness) rep.witness = std::make_pair(p, q);
    }
  }
  return rep;
}

/// Optimal transport, full fiber: p in D, A >= 0, g(p) det A >= f(x).
/// Throws DirectionalityViolation when the sampled check of g on D fails.
inline VariableFiberMap fiber_optimal_transport(GradientField g, DirectionalCone cone, ScalarField f, Box domain,
                                                int directionality_samples = 2000) {
  const int n = domain.dim();
  const auto rep = check_directionality(g, cone, n, directionality_samples);
  if (rep.violations > 0)
    fail(ErrorCode::DirectionalityViolation, std::to_string(rep.violations) + " of " + std::to_string(rep.checked) +
                                                 " sampled pairs have g(p + q) < g(p) on " + cone.key());
  MonotonicityCone m(0.0, cone, HessianRadius::infinite());
  auto at = [g, cone, f](const Vec& x) {
    const double fx = f(x);
    if (fx < 0.0) fail(ErrorCode::NegativeSource, "f(x) = " + format_number(fx) + " < 0");
    return FiberOracle(Arity::GradientHessian, "optimal-transport", "p in D, A >= 0, g(p) det A >= f(x)",
                       [g, cone, fx](const Jet2& j) {
                         const Vec ev = eigenvalues(j.A);
                         const double dv = cone.value(j.p);
                         if (dv < 0.0) return dv;
                         return std::min({dv, ev(0), g(j.p) * ev.prod() - fx});
                       });
  };
  return {"optimal-transport", std::move(domain), at, m, m.interior_jet(n)};
}

}  // namespace npt
