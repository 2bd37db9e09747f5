#pragma once

// Dirichlet duality F~ = (-Int F)^c, evaluated through the oracle's own
// defining functional: J in F~ iff value_F(-J) <= 0, so the dual functional
// is J -> -value_F(-J). The sampled checks here are the evidence behind the
// comparison method (involution, monotonicity, jet addition).

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "npt/catalog.hpp"
#include "npt/random.hpp"

namespace npt {

inline FiberOracle dual(const FiberOracle& f) {
  return FiberOracle(f.arity(), f.label() + "~", "dual of [" + f.functional_text() + "]",
                     [f](const Jet2& j) { return -f.value(-j); });
}

/// Region of J with respect to F~, margins taken from F at -J.
inline Region dual_contains(const FiberOracle& f, const Jet2& j, double tol = kDefaultTol) {
  return classify_value(-f.value(-j), tol);
}

/// Summary shared by every sampled check. Serializes to
/// {checked, passed, excluded_boundary, worst_margin, witnesses}.
struct CheckReport {
  std::string name;
  long checked = 0;
  long passed = 0;
  long excluded_boundary = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::vector<Jet2> witnesses;
  std::uint64_t seed = kDefaultSeed;

  long failed() const { return checked - passed; }
  bool ok() const { return checked > 0 && failed() == 0; }

  void record(bool pass, double margin, const Jet2& witness, std::size_t max_witnesses = 8) {
    ++checked;
    worst_margin = std::min(worst_margin, margin);
    if (pass) {
      ++passed;
    } else if (witnesses.size() < max_witnesses) {
      witnesses.push_back(witness);
    }
  }
};

/// Jets restricted to the slots the arity reads, with entries ~ N(0, scale^2).
inline Jet2 sample_jet(Sampler& s, int n, Arity arity, double scale = 1.0) {
  Jet2 j = s.jet(n, scale);
  if (!reads_value(arity)) j.r = 0.0;
  if (!reads_gradient(arity)) j.p.setZero();
  return j;
}

/// Draws members of f: random jets, pushed toward the fiber by the cone
/// direction (-1, 0, I) when rejected. Falls back to rejection sampling,
/// every other redraw with p = 0.
inline Jet2 sample_member(const FiberOracle& f, Sampler& s, int n, double scale = 1.0, int max_tries = 64) {
  Jet2 j = sample_jet(s, n, f.arity(), scale);
  Jet2 dir = Jet2::zero(n);
  dir.A = SymMat::identity(n);
  if (reads_value(f.arity())) dir.r = -1.0;
  for (int t = 0; t < max_tries; ++t) {
    if (f.value(j) >= 0.0) return j;
    if (t % 2 == 0) {
      j += s.uniform(0.0, 2.0) * scale * dir;
    } else {
      j = sample_jet(s, n, f.arity(), scale);
      // gradient constraints such as p = 0 are never hit by continuous draws
      if (t % 4 == 3) j.p.setZero();
    }
  }
  return j;
}

/// J in F~~ agrees with J in F for sampled J classified by F with margin
/// above 3 tol; boundary-band jets are counted in excluded_boundary.
inline CheckReport check_involution(const FiberOracle& f, int n, int samples, std::uint64_t seed = kDefaultSeed,
                                    double tol = kDefaultTol) {
  Sampler s(seed);
  CheckReport rep{"involution:" + f.label()};
  rep.seed = seed;
  const FiberOracle dd = dual(dual(f));
  for (int i = 0; i < samples; ++i) {
    const Jet2 j = sample_jet(s, n, f.arity(), s.log_uniform(1e-3, 10.0));
    const Region a = f.classify(j, tol);
    if (a.where == Location::Boundary || a.margin <= 3.0 * tol) {
      ++rep.excluded_boundary;
      continue;
    }
    const Region b = dd.classify(j, tol);
    rep.record(a.member() == b.member(), a.margin, j);
  }
  return rep;
}

/// Sampled F + M in F: J in F, K in M, J + K in F.
inline CheckReport check_monotonicity(const FiberOracle& f, const FiberOracle& m, int n, int samples,
                                      std::uint64_t seed = kDefaultSeed, double tol = kDefaultTol) {
  Sampler s(seed);
  CheckReport rep{"monotonicity:" + f.label() + "+" + m.label()};
  rep.seed = seed;
  for (int i = 0; i < samples; ++i) {
    const double scale = s.log_uniform(1e-2, 10.0);
    const Jet2 j = sample_member(f, s, n, scale);
    const Jet2 k = sample_member(m, s, n, s.log_uniform(1e-2, 10.0));
    if (f.value(j) < 0.0 || m.value(k) < 0.0) continue;
    const double v = f.value(j + k);
    rep.record(v >= -tol * (1.0 + jet_norm(j) + jet_norm(k)), v, j + k);
  }
  return rep;
}

inline CheckReport check_monotonicity(const VariableFiberMap& theta, const FiberOracle& m, int points, int samples,
                                      std::uint64_t seed = kDefaultSeed, double tol = kDefaultTol) {
  Sampler s(seed);
  CheckReport rep{"monotonicity:" + theta.label + "+" + m.label()};
  rep.seed = seed;
  const int n = theta.domain.dim();
  for (int c = 0; c < points; ++c) {
    Vec x(n);
    for (int d = 0; d < n; ++d) x(d) = s.uniform(theta.domain.lo(d), theta.domain.hi(d));
    const CheckReport part = check_monotonicity(theta(x), m, n, samples, seed + 1 + c, tol);
    rep.checked += part.checked;
    rep.passed += part.passed;
    rep.worst_margin = std::min(rep.worst_margin, part.worst_margin);
    for (const auto& w : part.witnesses)
      if (rep.witnesses.size() < 8) rep.witnesses.push_back(w);
  }
  return rep;
}

/// Sampled F + F~ in M~. Refuses to run (HypothesisViolation) unless the
/// sampled F + M in F check passes first.
inline CheckReport check_jet_addition(const FiberOracle& f, const FiberOracle& m, int n, int samples,
                                      std::uint64_t seed = kDefaultSeed, double tol = kDefaultTol) {
  const CheckReport mono = check_monotonicity(f, m, n, std::max(samples, 1000), seed, tol);
  if (!mono.ok()) fail(ErrorCode::HypothesisViolation, f.label() + " is not sampled " + m.label() + "-monotone");
  Sampler s(seed ^ 0x9e3779b97f4a7c15ULL);
  const FiberOracle fd = dual(f);
  const FiberOracle md = dual(m);
  CheckReport rep{"jet-addition:" + f.label() + "+" + fd.label() + "<" + md.label()};
  rep.seed = seed;
  for (int i = 0; i < samples; ++i) {
    const Jet2 j = sample_member(f, s, n, s.log_uniform(1e-2, 10.0));
    const Jet2 jd = sample_member(fd, s, n, s.log_uniform(1e-2, 10.0));
    if (f.value(j) < 0.0 || fd.value(jd) < 0.0) continue;
    const double v = md.value(j + jd);
    rep.record(v >= -tol * (1.0 + jet_norm(j) + jet_norm(jd)), v, j + jd);
  }
  return rep;
}

/// Sampled inclusion F in G (membership in F implies membership in G).
inline CheckReport check_inclusion(const FiberOracle& f, const FiberOracle& g, int n, int samples,
                                   std::uint64_t seed = kDefaultSeed, double tol = kDefaultTol) {
  Sampler s(seed);
  CheckReport rep{"inclusion:" + f.label() + "<" + g.label()};
  rep.seed = seed;
  for (int i = 0; i < samples; ++i) {
    const Jet2 j = sample_jet(s, n, join(f.arity(), g.arity()), s.log_uniform(1e-3, 10.0));
    const Region a = f.classify(j, tol);
    if (!a.member()) continue;
    if (a.margin <= 3.0 * tol && a.where != Location::Interior) {
      ++rep.excluded_boundary;
      continue;
    }
    const Region b = g.classify(j, tol);
    rep.record(b.member(), b.value, j);
  }
  return rep;
}

}  // namespace npt
