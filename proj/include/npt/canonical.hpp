#pragma once

// Canonical and signed-distance operators of cone subequations, and sampled
// checkers for operator/subequation pairs (F, G).

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "npt/duality.hpp"
#include "npt/fiberegularity.hpp"
#include "npt/grid.hpp"

namespace npt {

/// The t with A - tI on the boundary of F, normalized so that
/// canonical(A + sI) = canonical(A) + s. Bisection on the membership of
/// A - tI, which decreases in t for any F with the positivity property.
inline double canonical_operator(const FiberOracle& f, const SymMat& a, double tol = 1e-13) {
  auto member = [&](double t) { return f.value(Jet2::hessian(a.shifted(-t))) >= 0.0; };
  double radius = spectral_norm(a) + 1.0;
  double lo = -radius, hi = radius;
  while (!(member(lo) && !member(hi))) {
    radius *= 2.0;
    if (radius > 1e6) fail(ErrorCode::BracketingFailure, f.label() + ": no boundary crossing along the identity within 1e6");
    lo = -radius;
    hi = radius;
  }
  const double stop = tol * (1.0 + spectral_norm(a));
  while (hi - lo > stop) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (member(mid)) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

inline FiberOracle canonical_oracle(const FiberOracle& f) {
  return FiberOracle(Arity::PureSecondOrder, "canonical(" + f.label() + ")", "the t with A - tI on the boundary of " + f.label(),
                     [f](const Jet2& j) { return canonical_operator(f, j.A); });
}

/// The direction (-1, 0, I) restricted to the slots the arity reads.
inline Jet2 cone_direction(int n, Arity arity) {
  Jet2 d = Jet2::zero(n);
  d.A = SymMat::identity(n);
  if (reads_value(arity)) d.r = -1.0;
  return d;
}

/// +-dist(J, boundary of F) in the jet norm, from the first crossing along
/// sampled unit rays. The first two rays are +-(-1, 0, I); the rest come from
/// a fixed seed, so more directions only ever shrink the estimate.
inline double signed_distance(const FiberOracle& f, const Jet2& j, int directions = 256, std::uint64_t seed = kDefaultSeed,
                              double tol = kDefaultTol) {
  const double v0 = f.value(j);
  if (std::abs(v0) <= tol) return 0.0;
  const bool inside = v0 > 0.0;
  const int n = j.dim();
  const double cap = 1e6 * (1.0 + jet_norm(j));
  double best = std::numeric_limits<double>::infinity();
  Sampler s(seed);
  const Jet2 base = cone_direction(n, f.arity());
  for (int k = 0; k < directions; ++k) {
    Jet2 u = k == 0 ? base : (k == 1 ? -base : sample_jet(s, n, f.arity()));
    const double un = jet_norm(u);
    if (un == 0.0) continue;
    u = (1.0 / un) * u;
    auto flipped = [&](double t) { return (f.value(j + t * u) >= 0.0) != inside; };
    const double limit = std::min(best, cap);
    double a = 0.0, b = 1e-9 * (1.0 + jet_norm(j));
    while (b < limit && !flipped(b)) {
      a = b;
      b *= 2.0;
    }
    if (b >= limit) {
      b = limit;
      if (!flipped(b)) continue;
    }
    for (int it = 0; it < 100 && b - a > 1e-14 * (1.0 + b); ++it) {
      const double mid = 0.5 * (a + b);
      if (flipped(mid)) b = mid; else a = mid;
    }
    best = std::min(best, b);
  }
  if (!std::isfinite(best)) return inside ? cap : -cap;
  return inside ? best : -best;
}

/// An operator together with its constraint set G. degree is the homogeneity
/// used to scale tolerances (3 for -r det A on 2x2 matrices).
struct OperatorPair {
  std::string label;
  std::function<double(const Jet2&)> op;
  FiberOracle G;
  int degree = 1;
};

/// All of J^2 in the given slots.
inline FiberOracle whole_space(Arity arity = Arity::PureSecondOrder) {
  return FiberOracle(arity, "J2", "everything", [](const Jet2&) { return std::numeric_limits<double>::infinity(); });
}

/// {J in G : op(J) >= 0}.
inline FiberOracle induced_fiber(const OperatorPair& pair) {
  return FiberOracle(pair.G.arity(), "{" + pair.label + " >= 0}", pair.G.functional_text() + " and " + pair.label + " >= 0",
                     [pair](const Jet2& j) { return std::min(pair.G.value(j), pair.op(j)); });
}

/// Sampled op(r + s, p, A + P) >= op(r, p, A) on G, s <= 0, P >= 0.
inline CheckReport check_proper_elliptic(const OperatorPair& pair, int n, int samples, std::uint64_t seed = kDefaultSeed,
                                         double tol = kDefaultTol) {
  Sampler s(seed);
  CheckReport rep{"proper-elliptic:" + pair.label};
  rep.seed = seed;
  for (int i = 0; i < samples; ++i) {
    const Jet2 j = sample_member(pair.G, s, n, s.log_uniform(1e-2, 3.0));
    if (pair.G.value(j) < 0.0) continue;
    Jet2 k = j;
    k.A = j.A + s.psd(n, s.integer(1, n), s.log_uniform(1e-3, 3.0));
    if (reads_value(pair.G.arity())) k.r -= s.log_uniform(1e-3, 3.0);
    const double a = pair.op(j), b = pair.op(k);
    const double slack = tol * std::pow(1.0 + jet_norm(k), pair.degree);
    rep.record(b >= a - slack, b - a, j);
  }
  return rep;
}

/// Sampled two-sided compatibility of the induced fiber: interior jets carry
/// op > tol and boundary jets carry op = 0 up to a degree-scaled slack. Probes
/// the faces of G by pushing to the fiber boundary, zeroing r, making A
/// singular and zeroing A.
inline CheckReport check_compatibility(const OperatorPair& pair, const FiberOracle& induced, int n, int samples,
                                       std::uint64_t seed = kDefaultSeed, double tol = kDefaultTol) {
  Sampler s(seed);
  CheckReport rep{"compatibility:" + pair.label};
  rep.seed = seed;
  const Jet2 dir = cone_direction(n, pair.G.arity());
  for (int i = 0; i < samples; ++i) {
    Jet2 j = sample_member(pair.G, s, n, s.log_uniform(1e-2, 3.0));
    switch (i % 4) {
      case 0:
        if (auto b = push_to_boundary(induced, j, dir)) j = *b;
        break;
      case 1:
        if (reads_value(pair.G.arity())) j.r = 0.0;
        break;
      case 2: j.A = j.A.shifted(-lambda_min(j.A)); break;
      case 3: j.A = SymMat::zero(n); break;
    }
    const Region reg = induced.classify(j, tol);
    const double v = pair.op(j);
    const double slack = 1e3 * tol * std::pow(1.0 + jet_norm(j), pair.degree);
    if (reg.where == Location::Interior) rep.record(v > tol, v, j);
    else if (reg.where == Location::Boundary) rep.record(std::abs(v) <= slack, -std::abs(v), j);
  }
  return rep;
}

/// Level sets {J in G : op(J) = c} have empty interior: every sampled level
/// point has a G-member within radius (1 + |J|) whose value differs from c.
inline CheckReport check_topological_tameness(const OperatorPair& pair, const std::vector<double>& levels, int n, int samples,
                                              std::uint64_t seed = kDefaultSeed, double radius = 1e-6, int probes = 32) {
  Sampler s(seed);
  CheckReport rep{"tameness:" + pair.label};
  rep.seed = seed;
  const Jet2 dir = cone_direction(n, pair.G.arity());
  for (double c : levels) {
    const FiberOracle level(pair.G.arity(), "level", "op - c", [&pair, c](const Jet2& j) { return pair.op(j) - c; });
    for (int i = 0; i < samples; ++i) {
      const Jet2 start = sample_member(pair.G, s, n, s.log_uniform(1e-2, 3.0));
      const auto hit = push_to_boundary(level, start, dir);
      if (!hit || pair.G.value(*hit) < 0.0) continue;
      const double rho = radius * (1.0 + jet_norm(*hit));
      double spread = 0.0;
      for (int k = 0; k < probes; ++k) {
        Jet2 u = k == 0 ? dir : sample_jet(s, n, pair.G.arity());
        u = (rho / jet_norm(u)) * u;
        for (const Jet2& q : {*hit + u, *hit - u})
          if (pair.G.value(q) >= 0.0) spread = std::max(spread, std::abs(pair.op(q) - c));
      }
      rep.record(spread > 0.0, spread, *hit);
    }
  }
  return rep;
}

/// Sampled op(J + t J0) > op(J) for J in G and t in (0, 1]; J0 must lie in Int M.
inline CheckReport check_strict_M_monotone(const OperatorPair& pair, const FiberOracle& m, const Jet2& j0, int samples,
                                           std::uint64_t seed = kDefaultSeed, double tol = kDefaultTol) {
  if (!(m.value(j0) > tol)) fail(ErrorCode::ReferenceJetNotInterior, "reference jet is not in the interior of " + m.label());
  const int n = j0.dim();
  Sampler s(seed);
  CheckReport rep{"strict-monotone:" + pair.label};
  rep.seed = seed;
  const Jet2 dir = cone_direction(n, pair.G.arity());
  for (int i = 0; i < samples; ++i) {
    Jet2 j = sample_member(pair.G, s, n, s.log_uniform(1e-2, 3.0));
    if (i % 2 == 1)
      if (auto b = push_to_boundary(pair.G, j, dir)) j = *b;
    if (pair.G.value(j) < -tol) continue;
    const double t = s.log_uniform(1e-3, 1.0);
    const double gain = pair.op(j + t * j0) - pair.op(j);
    rep.record(gain > 0.0, gain, j);
  }
  return rep;
}

/// F(x, J) = op(J) - level(x) at the discrete jet of u.
struct AdmissibleTest {
  bool in_G = false;
  double value = 0.0;
  Jet2 jet;
};

inline AdmissibleTest admissible_probe(const OperatorPair& pair, const GridFunction& u, int node, const ScalarField& level,
                                       double tol) {
  if (!u.grid.interior(node)) fail(ErrorCode::BoundaryNode, "node " + std::to_string(node) + " lies in the boundary layer");
  AdmissibleTest t;
  t.jet = discrete_jet(u, node);
  t.in_G = pair.G.contains(t.jet, tol);
  t.value = pair.op(t.jet) - (level ? level(u.grid.x(node)) : 0.0);
  return t;
}

/// J in G and F(x, J) >= 0 for the discrete jet J of u at the node.
inline bool admissible_subsolution_test(const OperatorPair& pair, const GridFunction& u, int node, const ScalarField& level = {},
                                        double tol = kDefaultTol) {
  const auto t = admissible_probe(pair, u, node, level, tol);
  return t.in_G && t.value >= -tol * std::pow(1.0 + jet_norm(t.jet), pair.degree);
}

/// Either J is outside G, or J in G with F(x, J) <= 0.
inline bool admissible_supersolution_test(const OperatorPair& pair, const GridFunction& u, int node, const ScalarField& level = {},
                                          double tol = kDefaultTol) {
  const auto t = admissible_probe(pair, u, node, level, tol);
  return !t.in_G || t.value <= tol * std::pow(1.0 + jet_norm(t.jet), pair.degree);
}

}  // namespace npt
