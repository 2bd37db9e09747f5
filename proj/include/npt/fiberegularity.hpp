#pragma once

// Sampled probe of the uniform inclusion  Theta(x) + eta J0 in Theta(y)
// for |x - y| < delta.

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "npt/catalog.hpp"

namespace npt {

struct FiberegularitySamples {
  int points_per_dim = 8;
  int jets_per_point = 16;
  double probe_radius = -1.0;  // <= 0: the domain diameter
  double max_eigenvalue = 1e3;  // jets are drawn with |lambda| log-uniform in [1e-2, max]
  std::uint64_t seed = kDefaultSeed;
  double tol = kDefaultTol;
};

struct FiberegularityWitness {
  Vec x;
  Vec y;
  Jet2 jet;  // in Theta(x), while jet + eta J0 is not in Theta(y)
};

struct FiberegularityReport {
  double delta = 0.0;       // largest sampled delta with no violation among closer pairs
  double resolution = 0.0;  // sample spacing
  long pairs = 0;
  long failures = 0;
  std::optional<FiberegularityWitness> witness;  // closest violating pair

  /// The inclusion already fails at the sample resolution.
  bool counterexample() const { return witness.has_value() && delta <= resolution * (1.0 + 1e-9); }
};

/// Moves J along J0 onto the boundary of the fiber (value 0). Returns nullopt
/// when no sign change is found within |t| <= t_max.
inline std::optional<Jet2> push_to_boundary(const FiberOracle& f, const Jet2& j, const Jet2& j0, double t_max = 1e6) {
  auto at = [&](double t) { return f.value(j + t * j0); };
  double v0 = at(0.0);
  if (v0 == 0.0) return j;
  // members move down along -J0, non-members up along +J0
  const double dir = v0 < 0.0 ? 1.0 : -1.0;
  double a = 0.0, b = 0.0;
  bool found = false;
  for (double step = 1.0; step <= t_max; step *= 2.0) {
    if ((at(dir * step) >= 0.0) != (v0 >= 0.0)) {
      a = step == 1.0 ? 0.0 : dir * step / 2.0;
      b = dir * step;
      found = true;
      break;
    }
  }
  if (!found) return std::nullopt;
  // a is on the side of j (same sign as v0), b on the other
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid == a || mid == b) break;
    if ((at(mid) >= 0.0) == (v0 >= 0.0)) a = mid; else b = mid;
  }
  // the member end of the final bracket
  const double t = v0 >= 0.0 ? a : b;
  return j + t * j0;
}

/// Random jet with eigenvalue magnitudes spread over several decades.
inline Jet2 spread_jet(Sampler& s, int n, double max_eigenvalue) {
  Vec lam(n);
  for (int i = 0; i < n; ++i) lam(i) = (s.coin() ? 1.0 : -1.0) * s.log_uniform(1e-2, max_eigenvalue);
  return {s.normal(), s.gaussian_vec(n), s.with_spectrum(lam)};
}

inline FiberegularityReport check_fiberegularity(const VariableFiberMap& theta, const MonotonicityCone& m, const Box& omega,
                                                 double eta, const FiberegularitySamples& cfg = {}) {
  const int n = omega.dim();
  const Jet2& j0 = theta.reference_jet;
  if (!(m.value(j0) > cfg.tol)) fail(ErrorCode::ReferenceJetNotInterior, "reference jet is not in the interior of " + m.key());

  const int k = std::max(cfg.points_per_dim, 1);
  std::vector<Vec> pts;
  std::vector<int> idx(n, 0);
  const Vec span = omega.hi - omega.lo;
  double spacing = std::numeric_limits<double>::infinity();
  for (int d = 0; d < n; ++d) spacing = std::min(spacing, k > 1 ? span(d) / (k - 1) : span(d));
  for (;;) {
    Vec x(n);
    for (int d = 0; d < n; ++d) x(d) = k > 1 ? omega.lo(d) + span(d) * idx[d] / (k - 1) : 0.5 * (omega.lo(d) + omega.hi(d));
    pts.push_back(x);
    int d = 0;
    while (d < n && ++idx[d] == k) idx[d++] = 0;
    if (d == n) break;
  }

  Sampler s(cfg.seed);
  std::vector<FiberOracle> fibers;
  fibers.reserve(pts.size());
  for (const Vec& x : pts) fibers.push_back(theta(x));

  std::vector<std::vector<Jet2>> jets(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (int c = 0; c < cfg.jets_per_point; ++c) {
      if (auto b = push_to_boundary(fibers[i], spread_jet(s, n, cfg.max_eigenvalue), j0)) jets[i].push_back(*b);
    }
  }

  const double radius = cfg.probe_radius > 0.0 ? cfg.probe_radius : omega.diameter();
  FiberegularityReport rep;
  rep.resolution = spacing;
  rep.delta = radius;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (i == j) continue;
      const double dist = (pts[i] - pts[j]).norm();
      if (dist > radius) continue;
      ++rep.pairs;
      for (const Jet2& jet : jets[i]) {
        if (fibers[j].value(jet + eta * j0) < -cfg.tol) {
          ++rep.failures;
          if (dist < rep.delta || !rep.witness) {
            rep.delta = std::min(rep.delta, dist);
            rep.witness = FiberegularityWitness{pts[i], pts[j], jet};
          }
          break;
        }
      }
    }
  }
  return rep;
}

inline FiberegularityReport check_fiberegularity(const VariableFiberMap& theta, double eta, const FiberegularitySamples& cfg = {}) {
  return check_fiberegularity(theta, theta.monotonicity, theta.domain, eta, cfg);
}

}  // namespace npt
