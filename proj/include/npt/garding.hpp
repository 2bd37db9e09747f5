#pragma once

// I-hyperbolic polynomials on S(n) and their eigenvalues.
//
// Gårding eigenvalues are the negated roots of g(x) = F(xI + A/R), with
// R = 2(1 + |A|). A Chebyshev interpolant of g gives first estimates via a
// Rolle cascade (roots of p^(j+1) bracket those of p^(j)). Coefficient form
// is too ill-conditioned for clustered roots, so the estimates are then
// grouped by sign parity of g itself: simple roots are polished by toms748,
// clusters by repeatedly zooming a deflated local fit whose colleague matrix
// also exposes any imaginary parts.

#include <boost/math/tools/toms748_solve.hpp>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "npt/catalog.hpp"
#include "npt/fiber.hpp"
#include "npt/format.hpp"
#include "npt/random.hpp"

namespace npt {

namespace cheb {

/// Chebyshev coefficients of the degree-m interpolant of f at the m+1
/// first-kind nodes; exact (up to rounding) when f is a polynomial of degree m.
inline Eigen::VectorXd fit(const std::function<double(double)>& f, int m) {
  const int k = m + 1;
  Eigen::VectorXd vals(k);
  for (int i = 0; i < k; ++i) vals(i) = f(std::cos(std::numbers::pi * (i + 0.5) / k));
  Eigen::VectorXd c(k);
  for (int j = 0; j < k; ++j) {
    double s = 0.0;
    for (int i = 0; i < k; ++i) s += vals(i) * std::cos(j * std::numbers::pi * (i + 0.5) / k);
    c(j) = 2.0 * s / k;
  }
  c(0) *= 0.5;
  return c;
}

/// Clenshaw evaluation, valid for any real x.
inline double eval(const Eigen::VectorXd& c, double x) {
  double b1 = 0.0, b2 = 0.0;
  for (Eigen::Index j = c.size() - 1; j >= 1; --j) {
    const double b0 = 2.0 * x * b1 - b2 + c(j);
    b2 = b1;
    b1 = b0;
  }
  return x * b1 - b2 + c(0);
}

inline Eigen::VectorXd derivative(const Eigen::VectorXd& c) {
  const Eigen::Index m = c.size() - 1;
  if (m == 0) return Eigen::VectorXd::Zero(1);
  Eigen::VectorXd d = Eigen::VectorXd::Zero(m + 1);  // two trailing zero slots for the recurrence
  for (Eigen::Index k = m - 1; k >= 0; --k) d(k) = (k + 2 <= m ? d(k + 2) : 0.0) + 2.0 * (k + 1) * c(k + 1);
  d(0) *= 0.5;
  return d.head(m);
}

}  // namespace cheb

struct GardingRoots {
  Eigen::VectorXd values;  // Lambda_1 <= ... <= Lambda_m
  double imag_residue = 0.0;
};

class GardingOperator;

struct HyperbolicityReport {
  std::string label;
  int checked = 0;
  int real = 0;
  double max_residue = 0.0;
  std::uint64_t seed = kDefaultSeed;
  std::vector<SymMat> witnesses;

  double fraction() const { return checked ? static_cast<double>(real) / checked : 0.0; }
  bool ok() const { return checked > 0 && real == checked; }
};

GardingRoots garding_roots(const GardingOperator& op, const SymMat& a);
HyperbolicityReport hyperbolicity_check(const GardingOperator& op, int samples, double tol = 1e-7,
                                        std::uint64_t seed = kDefaultSeed);

/// Degree-m polynomial on S(n), I-hyperbolic with eval(I) > 0.
class GardingOperator {
 public:
  using Eval = std::function<double(const SymMat&)>;

  /// Verifies eval(I) > 0 and records a hyperbolicity certificate on
  /// certificate_samples seeded random matrices (0 skips the certificate).
  GardingOperator(int n, int m, std::string label, std::string formula, Eval eval, int certificate_samples = 16)
      : n_(n), m_(m), label_(std::move(label)), formula_(std::move(formula)), eval_(std::make_shared<const Eval>(std::move(eval))) {
    if (n < 1 || n > kMaxDim) fail(ErrorCode::DimensionMismatch, "dimension " + std::to_string(n) + " outside 1..8");
    if (m < 1) fail(ErrorCode::BadParameters, "degree must be positive");
    eval_identity_ = (*eval_)(SymMat::identity(n));
    if (!(eval_identity_ > 0.0)) fail(ErrorCode::BadParameters, label_ + ": eval(I) = " + format_number(eval_identity_) + " is not positive");
    if (certificate_samples > 0) certificate_ = hyperbolicity_check(*this, certificate_samples);
  }

  int dim() const { return n_; }
  int degree() const { return m_; }
  const std::string& label() const { return label_; }
  const std::string& formula() const { return formula_; }

  double operator()(const SymMat& a) const {
    if (a.dim() != n_) fail(ErrorCode::DimensionMismatch, label_ + " acts on S(" + std::to_string(n_) + ")");
    return (*eval_)(a);
  }
  double eval_identity() const { return eval_identity_; }

  /// Sampled hyperbolicity evidence gathered at construction.
  const std::optional<HyperbolicityReport>& certificate() const { return certificate_; }
  const HyperbolicityReport& reverify(int samples, std::uint64_t seed = kDefaultSeed, double tol = 1e-7) {
    certificate_ = hyperbolicity_check(*this, samples, tol, seed);
    return *certificate_;
  }

 private:
  int n_;
  int m_;
  std::string label_;
  std::string formula_;
  std::shared_ptr<const Eval> eval_;
  double eval_identity_ = 0.0;
  std::optional<HyperbolicityReport> certificate_;
};

namespace detail {

/// Rounding level of a Clenshaw evaluation of c at x.
inline double noise_floor(const Eigen::VectorXd& c, double x) {
  return 32.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(c.size()) * c.cwiseAbs().sum() *
         std::pow(std::max(1.0, std::abs(x)), static_cast<double>(c.size() - 1));
}

template <typename F>
double refine(F&& f, double a, double b) {
  const double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  boost::uintmax_t iters = 200;
  auto tol = [](double lo, double hi) { return std::abs(hi - lo) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(lo)); };
  const auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
  return 0.5 * (r.first + r.second);
}

/// Complex roots of a Chebyshev series via its colleague matrix.
inline Eigen::VectorXcd colleague_roots(const Eigen::VectorXd& c) {
  const Eigen::Index m = c.size() - 1;
  if (m == 1) return Eigen::VectorXcd::Constant(1, -c(0) / c(1));
  Eigen::MatrixXd col = Eigen::MatrixXd::Zero(m, m);
  col(0, 1) = 1.0;
  for (Eigen::Index j = 1; j + 1 < m; ++j) {
    col(j, j - 1) = 0.5;
    col(j, j + 1) = 0.5;
  }
  col(m - 1, m - 2) += 0.5;
  for (Eigen::Index k = 0; k < m; ++k) col(m - 1, k) -= c(k) / (2.0 * c(m));
  return Eigen::EigenSolver<Eigen::MatrixXd>(col, false).eigenvalues();
}

/// Real estimates of all roots of a Chebyshev series by the Rolle cascade.
/// Brackets without a sign change, or with values at rounding level, yield
/// their critical point (a multiple root or the real part of a complex pair).
inline std::vector<double> cascade_estimates(const Eigen::VectorXd& c) {
  const int m = static_cast<int>(c.size()) - 1;
  const double lead_sign = c(m) > 0.0 ? 1.0 : -1.0;
  std::vector<Eigen::VectorXd> chain(m + 1);
  chain[0] = c;
  for (int j = 1; j <= m; ++j) chain[j] = cheb::derivative(chain[j - 1]);
  std::vector<double> roots{-chain[m - 1](0) / chain[m - 1](1)};
  for (int j = m - 2; j >= 0; --j) {
    const Eigen::VectorXd& p = chain[j];
    auto f = [&](double x) { return cheb::eval(p, x); };
    const int d = m - j;
    const std::vector<double>& xi = roots;
    std::vector<double> fx(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i) {
      fx[i] = f(xi[i]);
      if (std::abs(fx[i]) <= noise_floor(p, xi[i])) fx[i] = 0.0;
    }
    std::vector<double> next;
    next.reserve(d);
    auto outer = [&](std::size_t i, double dir, double limit_sign) {
      const double x0 = xi[i];
      if (fx[i] == 0.0 || (fx[i] > 0.0) == (limit_sign > 0.0)) return x0;
      double step = 0.5;
      double x1 = x0 + dir * step;
      while ((f(x1) > 0.0) != (limit_sign > 0.0) && step < 1e8) {
        step *= 2.0;
        x1 = x0 + dir * step;
      }
      return dir < 0.0 ? refine(f, x1, x0) : refine(f, x0, x1);
    };
    next.push_back(outer(0, -1.0, (d % 2 == 0) ? lead_sign : -lead_sign));
    for (std::size_t i = 0; i + 1 < xi.size(); ++i) {
      const double flo = fx[i], fhi = fx[i + 1];
      if (flo == 0.0 || fhi == 0.0) next.push_back(flo == 0.0 ? xi[i] : xi[i + 1]);
      else if ((flo > 0.0) != (fhi > 0.0)) next.push_back(refine(f, xi[i], xi[i + 1]));
      else next.push_back(std::abs(flo) <= std::abs(fhi) ? xi[i] : xi[i + 1]);
    }
    next.push_back(outer(xi.size() - 1, 1.0, lead_sign));
    std::sort(next.begin(), next.end());
    roots = std::move(next);
  }
  return roots;
}

inline int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

}  // namespace detail

inline GardingRoots garding_roots(const GardingOperator& op, const SymMat& a) {
  if (a.dim() != op.dim()) fail(ErrorCode::DimensionMismatch, op.label() + " acts on S(" + std::to_string(op.dim()) + ")");
  const int m = op.degree();
  const double scale = 2.0 * (1.0 + spectral_norm(a));
  const SymMat as = (1.0 / scale) * a;
  auto g = [&](double x) { return op(as.shifted(x)); };
  const double lead = op.eval_identity();
  const double eps = std::numeric_limits<double>::epsilon();

  const Eigen::VectorXd c = cheb::fit(g, m);
  if (!(std::abs(c(m)) > 1e-11 * c.cwiseAbs().maxCoeff()))
    fail(ErrorCode::DegenerateLeadingCoefficient, op.label() + ": leading coefficient vanishes; declared degree " + std::to_string(m) + " too high");
  std::vector<double> est = detail::cascade_estimates(c);

  // Refit on the window spanned by the estimates: clustered roots are far
  // better conditioned there than on [-1, 1].
  for (int pass = 0; pass < 2; ++pass) {
    const double center = 0.5 * (est.front() + est.back());
    const double half = 0.55 * (est.back() - est.front()) + 1e-3 * (1.0 + std::abs(center));
    const Eigen::VectorXd cw = cheb::fit([&](double t) { return g(center + half * t); }, m);
    if (!cw.allFinite() || !(std::abs(cw(m)) > 1e-13 * cw.cwiseAbs().maxCoeff())) break;
    std::vector<double> e = detail::cascade_estimates(cw);
    for (double& v : e) v = center + half * v;
    if (std::all_of(e.begin(), e.end(), [](double v) { return std::isfinite(v); })) est = std::move(e);
  }

  // Real Durand-Kerner sweeps on g itself; kept only when they converge
  // (they stall on multiple or complex roots).
  {
    const double span = est.back() - est.front();
    const double tiny = 1e-7 * (span + 1e-3);
    std::vector<double> z = est;
    for (int i = 1; i < m; ++i)
      if (z[i] - z[i - 1] < tiny) z[i] = z[i - 1] + tiny;
    std::vector<double> w(m);
    for (int it = 0; it < 60; ++it) {
      double step = 0.0;
      for (int i = 0; i < m; ++i) {
        double den = lead;
        for (int j = 0; j < m; ++j)
          if (j != i) den *= (z[i] - z[j]);
        w[i] = g(z[i]) / den;
      }
      for (int i = 0; i < m; ++i) {
        z[i] -= w[i];
        step = std::isfinite(w[i]) ? std::max(step, std::abs(w[i])) : std::numeric_limits<double>::infinity();
      }
      if (!std::isfinite(step) || step > 10.0 * (1.0 + span)) break;
      if (step <= 1e-13 * (1.0 + span)) {
        std::sort(z.begin(), z.end());
        est = z;
        break;
      }
    }
  }

  // Outer fences with the limiting signs of g.
  const int sign_lo = (m % 2 == 0) ? 1 : -1;
  double pad = 0.25;
  double lo = est.front() - pad, hi = est.back() + pad;
  for (int it = 0; it < 60 && detail::sign_of(g(lo)) != sign_lo; ++it) lo -= (pad *= 2.0);
  pad = 0.25;
  for (int it = 0; it < 60 && detail::sign_of(g(hi)) != 1; ++it) hi += (pad *= 2.0);

  struct Group {
    double l, r;
    int k;
    int first;
  };
  std::vector<Group> groups;
  for (int i = 0; i < m; ++i) {
    const double l = i == 0 ? lo : 0.5 * (est[i - 1] + est[i]);
    const double r = i == m - 1 ? hi : 0.5 * (est[i] + est[i + 1]);
    groups.push_back({l, r, 1, i});
  }
  // Merge until every group's fence signs match the parity of its root count.
  std::vector<int> fence_sign(m + 1);
  for (int i = 0; i < m; ++i) fence_sign[i] = detail::sign_of(g(groups[i].l));
  fence_sign[m] = detail::sign_of(g(hi));
  for (bool changed = true; changed && groups.size() > 1;) {
    changed = false;
    int f = 0;
    for (std::size_t i = 0; i < groups.size(); ++i) {
      const int sl = fence_sign[f], sr = fence_sign[f + groups[i].k];
      const int want = (groups[i].k % 2 == 0) ? 1 : -1;
      if (sl != 0 && sr != 0 && sl * sr == want) {
        f += groups[i].k;
        continue;
      }
      const std::size_t j = (i + 1 < groups.size() && (sr == 0 || i == 0 || sl != 0)) ? i + 1 : i - 1;
      const std::size_t left = std::min(i, j), right = std::max(i, j);
      groups[left].r = groups[right].r;
      groups[left].k += groups[right].k;
      groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(right));
      changed = true;
      break;
    }
  }

  std::vector<double> roots(est);
  for (const Group& grp : groups)
    if (grp.k == 1) roots[grp.first] = detail::refine(g, grp.l, grp.r);

  double residue = 0.0;
  for (const Group& grp : groups) {
    if (grp.k == 1) continue;
    // h = g / (lead * prod over outside roots) has exactly the group's roots.
    auto h = [&](double x) {
      double v = g(x) / lead;
      for (int i = 0; i < m; ++i)
        if (i < grp.first || i >= grp.first + grp.k) v /= (x - roots[i]);
      return v;
    };
    double l = grp.l, r = grp.r;
    const int sl = detail::sign_of(h(l));
    const int sr = (grp.k % 2 == 0) ? sl : -sl;
    std::vector<double> re;
    double im = std::numeric_limits<double>::infinity();
    for (int zoom = 0; zoom < 80; ++zoom) {
      const double mid = 0.5 * (l + r), half = 0.5 * (r - l);
      const Eigen::VectorXd lc = cheb::fit([&](double t) { return h(mid + half * t); }, grp.k);
      if (!lc.allFinite() || lc(grp.k) == 0.0) break;
      const Eigen::VectorXcd zt = detail::colleague_roots(lc);
      if (!zt.allFinite()) break;
      re.assign(grp.k, 0.0);
      for (int i = 0; i < grp.k; ++i) re[i] = mid + half * zt(i).real();
      im = half * zt.imag().cwiseAbs().maxCoeff();
      const double center = std::accumulate(re.begin(), re.end(), 0.0) / grp.k;
      double spread = im;
      for (double v : re) spread = std::max(spread, std::abs(v - center));
      const double nh = 2.0 * spread + 16.0 * eps * (1.0 + std::abs(center));
      if (!(nh < 0.5 * half)) break;
      // the narrower fences must still enclose every root of the group
      if (detail::sign_of(h(center - nh)) != sl || detail::sign_of(h(center + nh)) != sr) break;
      l = center - nh;
      r = center + nh;
    }
    if (re.empty()) {
      re.assign(est.begin() + grp.first, est.begin() + grp.first + grp.k);
      im = 0.5 * (grp.r - grp.l);
    }
    residue = std::max(residue, im);
    std::sort(re.begin(), re.end());
    for (int i = 0; i < grp.k; ++i) roots[grp.first + i] = re[i];
  }

  GardingRoots out;
  out.values.resize(m);
  for (int i = 0; i < m; ++i) out.values(i) = -scale * roots[i];
  std::sort(out.values.begin(), out.values.end());
  out.imag_residue = scale * residue;
  return out;
}

/// Ascending Gårding eigenvalues; NonRealRoots when the imaginary residue
/// exceeds tol (1 + |A|).
inline Eigen::VectorXd garding_eigenvalues(const GardingOperator& op, const SymMat& a, double tol = 1e-7) {
  GardingRoots r = garding_roots(op, a);
  const double bound = tol * (1.0 + spectral_norm(a));
  if (r.imag_residue > bound)
    fail(ErrorCode::NonRealRoots, op.label() + ": imaginary residue " + format_number(r.imag_residue) + " exceeds " + format_number(bound));
  return r.values;
}

inline HyperbolicityReport hyperbolicity_check(const GardingOperator& op, int samples, double tol, std::uint64_t seed) {
  Sampler s(seed);
  HyperbolicityReport rep{op.label()};
  rep.seed = seed;
  for (int i = 0; i < samples; ++i) {
    const SymMat a = s.symmetric(op.dim(), s.log_uniform(1e-2, 1e2));
    const GardingRoots r = garding_roots(op, a);
    const double rel = r.imag_residue / (1.0 + spectral_norm(a));
    rep.max_residue = std::max(rep.max_residue, rel);
    ++rep.checked;
    if (rel <= tol) ++rep.real;
    else if (rep.witnesses.size() < 8) rep.witnesses.push_back(a);
  }
  return rep;
}

/// Closed Gårding cone {Lambda_j(A) >= 0 for all j}.
inline Region garding_cone_contains(const GardingOperator& op, const SymMat& a, double tol = kDefaultTol) {
  return classify_value(garding_eigenvalues(op, a).minCoeff(), tol);
}

struct DirichletReport {
  std::string label;
  int checked = 0;
  int passed = 0;
  double worst = std::numeric_limits<double>::infinity();  // smallest Lambda_1 seen on A >= 0
  std::vector<SymMat> witnesses;
  bool ok() const { return checked > 0 && passed == checked; }
};

/// Sampled P in closed Gamma: Lambda_1(A) >= -tol (1 + |A|) for A >= 0.
inline DirichletReport garding_dirichlet_check(const GardingOperator& op, int samples, double tol = 1e-9,
                                               std::uint64_t seed = kDefaultSeed) {
  Sampler s(seed);
  DirichletReport rep{op.label()};
  for (int i = 0; i < samples; ++i) {
    const SymMat a = s.psd(op.dim(), -1, s.log_uniform(1e-2, 1e2));
    const double l1 = garding_eigenvalues(op, a).minCoeff();
    ++rep.checked;
    rep.worst = std::min(rep.worst, l1);
    if (l1 >= -tol * (1.0 + spectral_norm(a))) ++rep.passed;
    else if (rep.witnesses.size() < 8) rep.witnesses.push_back(a);
  }
  return rep;
}

/// {A : Lambda_k(A) >= 0}, k 1-based.
inline FiberOracle branch_oracle(const GardingOperator& op, int k) {
  if (k < 1 || k > op.degree()) fail(ErrorCode::IndexOutOfRange, "branch k=" + std::to_string(k) + " of degree " + std::to_string(op.degree()));
  return FiberOracle(Arity::PureSecondOrder, op.label() + "#" + std::to_string(k), "Lambda_" + std::to_string(k) + "(A) >= 0 for " + op.formula(),
                     [op, k](const Jet2& j) { return garding_eigenvalues(op, j.A)(k - 1); });
}

inline FiberOracle garding_cone(const GardingOperator& op) {
  FiberOracle b = branch_oracle(op, 1);
  return FiberOracle(Arity::PureSecondOrder, op.label(), "Lambda_j(A) >= 0 for all j, " + op.formula(), [b](const Jet2& j) { return b.value(j); });
}

// ---------------------------------------------------------------------------
// Built-in operators

inline GardingOperator op_det(int n) {
  return GardingOperator(n, n, "det", "det A", [](const SymMat& a) { return a.matrix().determinant(); });
}

/// Product over p-subsets of lambda_{i1} + ... + lambda_{ip}; degree C(n, p).
inline GardingOperator op_pfold(int n, int p) {
  if (p < 1 || p > n) fail(ErrorCode::IndexOutOfRange, "pfold p=" + std::to_string(p) + " with n=" + std::to_string(n));
  std::vector<std::vector<int>> subsets;
  std::vector<int> idx(p);
  for (int i = 0; i < p; ++i) idx[i] = i;
  for (;;) {
    subsets.push_back(idx);
    int i = p - 1;
    while (i >= 0 && idx[i] == n - p + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int k = i + 1; k < p; ++k) idx[k] = idx[k - 1] + 1;
  }
  const int m = static_cast<int>(subsets.size());
  return GardingOperator(n, m, "pfold:p=" + std::to_string(p), "prod over p-subsets of lambda_i1 + ... + lambda_ip",
                         [subsets](const SymMat& a) {
                           const Vec ev = eigenvalues(a);
                           double prod = 1.0;
                           for (const auto& s : subsets) {
                             double sum = 0.0;
                             for (int i : s) sum += ev(i);
                             prod *= sum;
                           }
                           return prod;
                         });
}

/// prod_j (lambda_j + delta tr A). Its eigenvalues are (lambda_j + delta tr A) / (1 + n delta).
inline GardingOperator op_delta_elliptic(int n, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) fail(ErrorCode::BadParameters, "delta must be positive");
  return GardingOperator(n, n, "delta-elliptic:" + format_number(delta), "prod_j (lambda_j(A) + delta tr A)",
                         [delta](const SymMat& a) {
                           const Vec ev = eigenvalues(a);
                           const double t = delta * ev.sum();
                           double prod = 1.0;
                           for (int i = 0; i < ev.size(); ++i) prod *= ev(i) + t;
                           return prod;
                         });
}

/// Lagrangian Monge-Ampere on S(2n): product over sign choices of
/// 0.5 tr A +- mu_1 +- ... +- mu_n; degree 2^n.
inline GardingOperator op_lagrangian_ma(int two_n) {
  if (two_n % 2 != 0) fail(ErrorCode::OddDimension, "Lagrangian Monge-Ampere needs an even dimension");
  const int n = two_n / 2;
  return GardingOperator(two_n, 1 << n, "lagrangian-ma", "prod over signs of (0.5 tr A +- mu_1 +- ... +- mu_n)",
                         [n](const SymMat& a) {
                           const Vec mu = skew_hermitian_mus(a);
                           const double half = 0.5 * a.trace();
                           double prod = 1.0;
                           for (int mask = 0; mask < (1 << n); ++mask) {
                             double v = half;
                             for (int i = 0; i < n; ++i) v += (mask >> i & 1) ? mu(i) : -mu(i);
                             prod *= v;
                           }
                           return prod;
                         });
}

/// k-Hessian sigma_k(lambda(A)).
inline GardingOperator op_sigma(int n, int k) {
  if (k < 1 || k > n) fail(ErrorCode::IndexOutOfRange, "sigma k=" + std::to_string(k) + " with n=" + std::to_string(n));
  return GardingOperator(n, k, "sigma:k=" + std::to_string(k), "sigma_" + std::to_string(k) + "(lambda(A))",
                         [k](const SymMat& a) { return elementary_symmetric(eigenvalues(a), k); });
}

/// Nonnegative least squares min |Bx - b|, x >= 0 (Lawson-Hanson active set).
inline Eigen::VectorXd nnls(const Eigen::MatrixXd& B, const Eigen::VectorXd& b, int max_iter = 500) {
  const Eigen::Index k = B.cols();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(k);
  std::vector<bool> passive(k, false);
  const double tol = 1e-12 * (1.0 + B.cwiseAbs().maxCoeff() * b.cwiseAbs().maxCoeff());
  auto solve_passive = [&]() {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index j = 0; j < k; ++j)
      if (passive[j]) cols.push_back(j);
    Eigen::MatrixXd bp(B.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) bp.col(static_cast<Eigen::Index>(c)) = B.col(cols[c]);
    const Eigen::VectorXd zp = bp.colPivHouseholderQr().solve(b);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(k);
    for (std::size_t c = 0; c < cols.size(); ++c) z(cols[c]) = zp(static_cast<Eigen::Index>(c));
    return z;
  };
  for (int outer = 0; outer < max_iter; ++outer) {
    const Eigen::VectorXd w = B.transpose() * (b - B * x);
    Eigen::Index t = -1;
    double wmax = tol;
    for (Eigen::Index j = 0; j < k; ++j)
      if (!passive[j] && w(j) > wmax) {
        wmax = w(j);
        t = j;
      }
    if (t < 0) break;
    passive[t] = true;
    for (int inner = 0; inner < max_iter; ++inner) {
      const Eigen::VectorXd z = solve_passive();
      bool feasible = true;
      for (Eigen::Index j = 0; j < k; ++j)
        if (passive[j] && z(j) <= 0.0) feasible = false;
      if (feasible) {
        x = z;
        break;
      }
      double alpha = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < k; ++j)
        if (passive[j] && z(j) <= 0.0) alpha = std::min(alpha, x(j) / (x(j) - z(j)));
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < k; ++j)
        if (passive[j] && x(j) <= tol) {
          passive[j] = false;
          x(j) = 0.0;
        }
    }
  }
  return x;
}

/// Vertices v in {lam, Lam}^n that are not nonnegative combinations of the
/// other vertices. Bit i of the index selects Lam in slot i.
inline std::vector<Eigen::VectorXd> pucci_extreme_vertices(double lam, double Lam, int n) {
  check_pucci_parameters(lam, Lam);
  const int count = 1 << n;
  std::vector<Eigen::VectorXd> verts(count, Eigen::VectorXd(n));
  for (int mask = 0; mask < count; ++mask)
    for (int i = 0; i < n; ++i) verts[mask](i) = (mask >> i & 1) ? Lam : lam;
  std::vector<Eigen::VectorXd> extreme;
  for (int v = 0; v < count; ++v) {
    Eigen::MatrixXd others(n, count - 1);
    for (int u = 0, c = 0; u < count; ++u)
      if (u != v) others.col(c++) = verts[u];
    const Eigen::VectorXd x = nnls(others, verts[v]);
    if ((others * x - verts[v]).norm() > 1e-9 * verts[v].norm()) extreme.push_back(verts[v]);
  }
  return extreme;
}

/// Product of l_v(A) = Sum_i v_i lambda_i(A) over the extreme vertices v.
inline GardingOperator op_pucci_garding(double lam, double Lam, int n) {
  const std::vector<Eigen::VectorXd> s = pucci_extreme_vertices(lam, Lam, n);
  return GardingOperator(n, static_cast<int>(s.size()), "pucci-garding:" + format_number(lam) + "," + format_number(Lam),
                         "prod over extreme v in {lam, Lam}^n of Sum_i v_i lambda_i(A)", [s](const SymMat& a) {
                           const Vec ev = eigenvalues(a);
                           double prod = 1.0;
                           for (const auto& v : s) prod *= v.dot(Eigen::VectorXd(ev));
                           return prod;
                         });
}

}  // namespace npt
