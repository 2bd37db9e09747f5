// Acceptance gate. `acceptance` runs every criterion, `acceptance 4 9` runs a
// subset; one PASS/FAIL line per criterion, exit status 1 if any fails.
// Reference values come from test-side oracles (Eigen spectra, brute-force
// sups, hand-derived dual formulas), not from the library routine under test.

#include <Eigen/Eigenvalues>
#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include "npt/npt.hpp"

using namespace npt;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream log;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      log << "\n    failed: " << what;
    }
  }
  void note(const std::string& what) { log << "\n    " << what; }
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

// Test-side spectrum, ascending.
Eigen::VectorXd oracle_spectrum(const SymMat& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

// Sorted normalized p-subset sums of the spectrum: the Garding eigenvalues of
// the p-fold operator under the eval(sI + A) convention.
std::vector<double> pfold_oracle(const Eigen::VectorXd& lam, int p) {
  const int n = static_cast<int>(lam.size());
  std::vector<double> out;
  std::vector<int> idx(p);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == p) {
      double s = 0.0;
      for (int i : idx) s += lam(i);
      out.push_back(s / p);
      return;
    }
    for (int i = start; i < n; ++i) {
      idx[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  Outcome o;
  const auto t0 = Clock::now();
  struct Case {
    GardingOperator op;
    std::function<std::vector<double>(const SymMat&)> lambda_oracle;  // empty when there is no closed form
  };
  std::vector<Case> cases;
  cases.push_back({op_det(3), [](const SymMat& a) {
                     const auto l = oracle_spectrum(a);
                     return std::vector<double>(l.data(), l.data() + l.size());
                   }});
  for (int n = 1; n <= 5; ++n)
    for (int p = 1; p <= n; ++p) cases.push_back({op_pfold(n, p), [p](const SymMat& a) { return pfold_oracle(oracle_spectrum(a), p); }});
  for (double delta : {0.1, 1.0})
    cases.push_back({op_delta_elliptic(3, delta), [delta](const SymMat& a) {
                       const auto l = oracle_spectrum(a);
                       std::vector<double> out;
                       for (int j = 0; j < 3; ++j) out.push_back((l(j) + delta * l.sum()) / (1.0 + 3.0 * delta));
                       return out;
                     }});
  for (int k = 1; k <= 4; ++k) cases.push_back({op_sigma(4, k), {}});
  cases.push_back({op_lagrangian_ma(2), {}});
  cases.push_back({op_pucci_garding(1, 2, 2), {}});
  cases.push_back({op_pucci_garding(1, 2, 3), {}});

  for (const auto& c : cases) {
    Sampler s(101);
    int imag_bad = 0, product_bad = 0, shift_bad = 0, oracle_bad = 0;
    double worst_imag = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const SymMat a = s.symmetric(c.op.dim(), s.log_uniform(0.1, 10.0));
      const double t = s.uniform(-3.0, 3.0);
      const GardingRoots r = garding_roots(c.op, a);
      const double imag = r.imag_residue / (1.0 + spectral_norm(a));
      worst_imag = std::max(worst_imag, imag);
      if (!(imag < 1e-7)) ++imag_bad;
      double prod = c.op.eval_identity();
      for (double l : r.values) prod *= l;
      const double v = c.op(a);
      if (std::abs(v - prod) > 1e-7 * std::abs(v) + 1e-12) ++product_bad;
      const GardingRoots rt = garding_roots(c.op, a.shifted(t));
      for (int j = 0; j < r.values.size(); ++j)
        if (std::abs(rt.values(j) - r.values(j) - t) > 1e-8) {
          ++shift_bad;
          break;
        }
      if (c.lambda_oracle) {
        const auto ref = c.lambda_oracle(a);
        for (int j = 0; j < r.values.size(); ++j)
          if (std::abs(ref[j] - r.values(j)) > 1e-8 * (1.0 + spectral_norm(a))) {
            ++oracle_bad;
            break;
          }
      }
    }
    const std::string name = c.op.label() + " on S(" + std::to_string(c.op.dim()) + ")";
    o.require(imag_bad == 0, name + ": " + std::to_string(imag_bad) + " matrices with imaginary residue >= 1e-7");
    o.require(product_bad == 0, name + ": product identity off at " + std::to_string(product_bad) + " matrices");
    o.require(shift_bad == 0, name + ": shift covariance off at " + std::to_string(shift_bad) + " matrices");
    o.require(oracle_bad == 0, name + ": eigenvalue oracle disagrees at " + std::to_string(oracle_bad) + " matrices");
  }
  const double elapsed = seconds_since(t0);
  o.require(elapsed < 60.0, "runtime " + num(elapsed) + " s exceeds 60 s");
  o.note(std::to_string(cases.size()) + " operators x 1000 matrices in " + num(elapsed) + " s");
  return o;
}

// ---------------------------------------------------------------------------

bool p_dual_by_hand(const SymMat& a) { return oracle_spectrum(a).maxCoeff() >= 0.0; }
bool q_dual_by_hand(const Jet2& j) { return j.r <= 0.0 || oracle_spectrum(j.A).maxCoeff() >= 0.0; }

Outcome criterion2() {
  Outcome o;
  const double tol = kDefaultTol;
  std::vector<std::pair<FiberOracle, int>> fibers{{cone_P(), 3}, {cone_P_dual(), 3}, {cone_Q(), 3}, {cone_Q_dual(), 3}, {cone_M0(), 3},
                                                 {cone_pucci(1, 2), 3}, {cone_quasiconvex(1.0), 3}, {cone_lagrangian(), 4},
                                                 {fiber_failure_example(2.0, Extremal::Min), 2}, {fiber_failure_example(2.0, Extremal::Max), 2}};
  for (int k = 1; k <= 3; ++k) {
    fibers.push_back({branch(k), 3});
    fibers.push_back({cone_pfold(k), 3});
    fibers.push_back({cone_sigma_k(k), 3});
  }
  for (const auto& m : {MonotonicityCone(1.0, DirectionalCone::halfspace(0), HessianRadius::infinite()),
                        MonotonicityCone(0.0, DirectionalCone::full(), HessianRadius::finite(1.0)),
                        MonotonicityCone(0.5, DirectionalCone::orthant({0, 1}), HessianRadius::finite(2.0))})
    fibers.push_back({cone_M(m), 3});

  long disagreements = 0, compared = 0;
  for (const auto& [f, n] : fibers) {
    const FiberOracle dd = dual(dual(f));
    Sampler s(202);
    long bad = 0;
    for (int i = 0; i < 10000; ++i) {
      const Jet2 j = sample_jet(s, n, Arity::Full, s.log_uniform(1e-3, 10.0));
      const double v = f.value(j);
      if (std::abs(v) <= 3.0 * tol) continue;
      ++compared;
      if ((v >= 0.0) != dd.contains(j, tol)) ++bad;
    }
    disagreements += bad;
    o.require(bad == 0, f.label() + ": " + std::to_string(bad) + " double-dual disagreements");
  }
  o.note(std::to_string(fibers.size()) + " oracles, " + std::to_string(compared) + " jets off the band, " + std::to_string(disagreements) +
         " disagreements");

  const FiberOracle pd = dual(cone_P()), qd = dual(cone_Q());
  Sampler s(202);
  long closed_bad = 0;
  for (int i = 0; i < 10000; ++i) {
    const Jet2 j = sample_jet(s, 3, Arity::Full, s.log_uniform(1e-3, 10.0));
    const bool p_hand = p_dual_by_hand(j.A), q_hand = q_dual_by_hand(j);
    if (pd.contains(j, 0.0) != p_hand || cone_P_dual().contains(j, 0.0) != p_hand) ++closed_bad;
    if (qd.contains(j, 0.0) != q_hand || cone_Q_dual().contains(j, 0.0) != q_hand) ++closed_bad;
  }
  o.require(closed_bad == 0, std::to_string(closed_bad) + " closed-form dual mismatches for P~ / Q~");
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion3() {
  Outcome o;
  Sampler s(303);
  double worst_p = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const SymMat a = s.symmetric(3);
    worst_p = std::max(worst_p, std::abs(canonical_operator(cone_P(), a) - oracle_spectrum(a)(0)));
  }
  o.require(worst_p <= 1e-9, "canonical(P) vs lambda_1 off by " + num(worst_p));
  o.note("canonical(P) = lambda_1 on 10^4 matrices, worst " + num(worst_p));

  const std::vector<std::pair<FiberOracle, int>> cones{{cone_P(), 3},        {cone_P_dual(), 3},      {branch(2), 3},
                                                       {cone_pfold(2), 3},   {cone_sigma_k(2), 3},    {cone_pucci(1, 2), 3},
                                                       {cone_quasiconvex(1.0), 3}, {cone_lagrangian(), 4}};
  double worst_co1 = 0.0, worst_co2 = 0.0;
  for (const auto& [f, n] : cones) {
    Sampler r(304);
    int co1 = 0, co2 = 0;
    for (int i = 0; i < 1000; ++i) {
      const SymMat a = r.symmetric(n);
      const SymMat p = r.psd(n, r.integer(1, n), r.log_uniform(1e-3, 3.0));
      const double t = r.uniform(-3.0, 3.0);
      const double c = canonical_operator(f, a);
      const double d1 = canonical_operator(f, a + p) - c;
      const double d2 = std::abs(canonical_operator(f, a.shifted(t)) - c - t);
      worst_co1 = std::min(worst_co1, d1);
      worst_co2 = std::max(worst_co2, d2);
      if (d1 < -1e-9) ++co1;
      if (d2 > 1e-9) ++co2;
    }
    o.require(co1 == 0, f.label() + ": canonical(A + P) < canonical(A) - 1e-9 at " + std::to_string(co1) + " samples");
    o.require(co2 == 0, f.label() + ": canonical(A + tI) != canonical(A) + t at " + std::to_string(co2) + " samples");
  }
  o.note("(CO1) worst decrease " + num(std::max(0.0, -worst_co1)) + ", (CO2) worst defect " + num(worst_co2) + " over " + std::to_string(cones.size()) + " cones");

  const FiberOracle pucci = cone_pucci(1.0, 2.0);
  int sign_bad = 0, sign_checked = 0;
  for (int i = 0; i < 10000; ++i) {
    const SymMat a = s.symmetric(3);
    const auto l = oracle_spectrum(a);
    double v = 0.0;
    for (int j = 0; j < 3; ++j) v += l(j) > 0.0 ? 1.0 * l(j) : 2.0 * l(j);
    if (std::abs(v) <= kDefaultTol) continue;
    ++sign_checked;
    if ((canonical_operator(pucci, a) > 0.0) != (v > 0.0)) ++sign_bad;
  }
  o.require(sign_bad == 0, std::to_string(sign_bad) + " Pucci sign disagreements");
  o.note("Pucci sign agreement on " + std::to_string(sign_checked) + " matrices");

  double worst_pf = 0.0;
  for (int n : {3, 4})
    for (int p = 1; p <= n; ++p) {
      const FiberOracle f = cone_pfold(p);
      for (int i = 0; i < 2000; ++i) {
        const SymMat a = s.symmetric(n);
        const auto l = oracle_spectrum(a);
        worst_pf = std::max(worst_pf, std::abs(canonical_operator(f, a) - l.head(p).mean()));
      }
    }
  o.require(worst_pf <= 1e-9, "pfold canonical vs mean of p smallest off by " + num(worst_pf));
  o.note("pfold canonical = mean of the p smallest eigenvalues (n = 3, 4), worst " + num(worst_pf));
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion4() {
  Outcome o;
  const Grid g = Grid::cube(2, 0, 1, 65);
  const ScalarField half_sq = [](const Vec& x) { return 0.5 * x.squaredNorm(); };
  const ScalarField saddle = [](const Vec& x) { return x(0) * x(0) - x(1) * x(1); };
  struct Run {
    std::string key;
    double level;
    ScalarField exact;
  };
  for (const Run& r : {Run{"P", 1.0, half_sq}, Run{"pfold:p=2", 0.0, saddle}, Run{"slag", std::numbers::pi / 2, half_sq}}) {
    SolveOptions opt;
    opt.tol = 1e-11;
    opt.max_iter = 100000;
    const auto t0 = Clock::now();
    try {
      const auto res = solve_dirichlet(scheme_from_key(r.key, 2), [c = r.level](const Vec&) { return c; }, r.exact, g, opt);
      const double elapsed = seconds_since(t0);
      double err = 0.0;
      for (int k = 0; k < g.size(); ++k) err = std::max(err, std::abs(res.u[k] - r.exact(g.x(k))));
      o.require(err <= 1e-6, r.key + ": max error " + num(err));
      o.require(elapsed < 30.0, r.key + ": " + num(elapsed) + " s");
      o.note(r.key + ": error " + num(err) + " after " + std::to_string(res.iterations) + " sweeps, " + num(elapsed) + " s");
    } catch (const Error& e) {
      o.require(false, r.key + ": " + e.what());
    }
  }
  return o;
}

// ---------------------------------------------------------------------------

ScalarField boundary_data(Sampler& s, int n) {
  const Vec k = s.gaussian_vec(n) * 2.0;
  const double a = s.uniform(-1.0, 1.0), b = s.uniform(-1.0, 1.0), phase = s.uniform(0.0, 6.0);
  return [=](const Vec& x) { return a * x.squaredNorm() + b * x(0) + std::sin(k.dot(x) + phase); };
}

// Finite-difference probe of the explicit update u_k + dt (F_h(u)_k - psi):
// raising any value it reads must not lower it.
long update_monotonicity_failures(const SchemeEvaluator& ev, int states, std::uint64_t seed) {
  Sampler s(seed);
  const Grid& g = ev.grid();
  const double dt = ev.stable_dt();
  const auto& nodes = ev.interior();
  long bad = 0;
  for (int t = 0; t < states; ++t) {
    std::vector<double> u(g.size());
    const double scale = s.log_uniform(1e-2, 1e1);
    for (double& v : u) v = scale * s.normal();
    const int k = nodes[s.integer(0, static_cast<int>(nodes.size()) - 1)];
    const double base = u[k] + dt * ev.apply(u, k);
    std::vector<int> touched{k};
    for (const Offset& o : g.stencil())
      for (int sign : {1, -1}) touched.push_back(g.shift(k, o, sign));
    for (int m : touched) {
      const double bump = scale * s.log_uniform(1e-6, 1.0);
      u[m] += bump;
      const double raised = u[k] + dt * ev.apply(u, k);
      u[m] -= bump;
      if (raised < base - 1e-12 * (1.0 + std::abs(base))) ++bad;
    }
  }
  return bad;
}

Outcome criterion5() {
  Outcome o;
  Sampler s(505);
  const std::vector<std::tuple<std::string, int, double>> cases{{"P", 2, 0.5}, {"branch:k=2", 2, 0.5}, {"pucci:1,2", 2, 0.3}, {"pfold:p=2", 3, 0.2}};
  for (const auto& [key, n, level] : cases) {
    const Grid g = Grid::cube(n, 0, 1, n == 2 ? 17 : 9);
    const SchemeEvaluator ev(scheme_from_key(key, n), g);
    const ScalarField psi = [c = level](const Vec&) { return c; };
    int ordered = 0;
    for (int t = 0; t < 10; ++t) {
      const ScalarField g1 = boundary_data(s, n);
      const ScalarField bump = boundary_data(s, n);
      const double lift = s.uniform(0.0, 0.5);
      const ScalarField g2 = [g1, bump, lift](const Vec& x) { return g1(x) + lift + 0.5 * (1.0 + std::tanh(bump(x))); };
      const auto u = solve_dirichlet(ev, psi, g1).u;
      const auto w = solve_dirichlet(ev, psi, g2).u;
      bool boundary_ok = true, interior_ok = true;
      for (int k = 0; k < g.size(); ++k) {
        if (g.interior(k)) interior_ok = interior_ok && u[k] <= w[k] + 1e-7;
        else boundary_ok = boundary_ok && u[k] <= w[k];
      }
      o.require(boundary_ok, key + ": boundary data not ordered");
      bool verdict = false;
      try {
        verdict = scheme_comparison_experiment(ev, psi, u, w, 1e-9, 1e-7).holds;
      } catch (const Error& e) {
        o.require(false, key + ": " + e.what());
      }
      ordered += interior_ok && verdict;
    }
    o.require(ordered == 10, key + ": " + std::to_string(ordered) + "/10 pairs ordered");
    const long bad = update_monotonicity_failures(ev, 1000, 506);
    o.require(bad == 0, key + ": update map not monotone at " + std::to_string(bad) + " probes");
    o.require(check_scheme_monotone(ev, 1000, 507).ok(), key + ": library monotonicity probe failed");
    o.note(key + " (n=" + std::to_string(n) + "): " + std::to_string(ordered) + "/10 pairs ordered, update map monotone at 1000 states");
  }
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion6() {
  Outcome o;
  const Box box = Box::cube(2, -0.3, 0.3);
  const Grid g(box, {13, 13});
  struct Case {
    std::string name;
    MonotonicityCone m;
    FiberOracle mtilde;
  };
  const MonotonicityCone reduced(0.0, DirectionalCone::full(), HessianRadius::infinite());
  const MonotonicityCone half(1.0, DirectionalCone::halfspace(0), HessianRadius::infinite());
  const MonotonicityCone ball(0.0, DirectionalCone::full(), HessianRadius::finite(1.0));
  const std::vector<Case> cases{{"reduced P", reduced, cone_P_dual()},
                                {"Q", reduced, cone_Q_dual()},
                                {"M(1, half e1, inf)", half, dual(cone_M(half))},
                                {"M(0, R^n, 1)", ball, dual(cone_M(ball))}};
  for (const auto& c : cases) {
    const auto psi = strict_approximator(c.m, box);
    o.require(psi.has_value(), c.name + ": no strict approximator on [-0.3, 0.3]^2");
    if (!psi) continue;
    const auto zs = zmp_samples(c.mtilde, g, 10, 606);
    o.require(zs.size() == 10, c.name + ": only " + std::to_string(zs.size()) + " samples in M~");
    int held = 0;
    for (const auto& z : zs) {
      double bmax = -std::numeric_limits<double>::infinity(), imax = bmax;
      for (int k = 0; k < g.size(); ++k) (g.interior(k) ? imax : bmax) = std::max(g.interior(k) ? imax : bmax, z[k]);
      bool verdict = false;
      try {
        verdict = zmp_experiment(c.mtilde, z).holds;
      } catch (const Error& e) {
        o.require(false, c.name + ": " + e.what());
      }
      held += bmax <= 0.0 && imax <= kDefaultTol && verdict;
    }
    o.require(held == static_cast<int>(zs.size()), c.name + ": zero maximum principle held for " + std::to_string(held) + " samples");
    o.note(c.name + ": " + psi->label + ", " + std::to_string(held) + "/" + std::to_string(zs.size()) + " samples obey z <= 0 inside");
  }
  // R = 1 on [-1, 1]^2: the half diagonal sqrt 2 exceeds the radius, so no
  // translate of D cap B_1 contains the box and no approximator is claimed.
  const Box big = Box::cube(2, -1, 1);
  const bool absent = !strict_approximator(ball, big).has_value();
  o.require(absent, "M(0, R^n, 1) on [-1, 1]^2 unexpectedly has a strict approximator");
  o.note(std::string("M(0, R^n, 1) on [-1, 1]^2: ") + (absent ? "no strict approximator (box not inside a translate of B_1), zero maximum principle not asserted" : "?"));
  return o;
}

// ---------------------------------------------------------------------------

double det2(const Jet2& j) { return j.A(0, 0) * j.A(1, 1) - j.A(0, 1) * j.A(1, 0); }

Outcome criterion7() {
  Outcome o;
  const OperatorPair product{"-r det A", [](const Jet2& j) { return -j.r * det2(j); }, cone_Q(), 3};
  const OperatorPair sum{"-r + det A", [](const Jet2& j) { return -j.r + det2(j); }, cone_Q(), 2};
  const auto good = check_compatibility(product, induced_fiber(product), 2, 4000, 707);
  o.require(good.ok(), "(-r det A, Q) fails compatibility at " + std::to_string(good.failed()) + " jets");
  const auto bad = check_compatibility(sum, induced_fiber(sum), 2, 4000, 707);
  o.require(bad.failed() > 0, "(-r + det A, Q) shows no incompatibility");
  int on_ray = 0;
  for (const Jet2& w : bad.witnesses) on_ray += w.r < 0.0 && w.A.matrix().isZero(0.0);
  o.require(on_ray > 0, "(-r + det A, Q): no witness of the form (r < 0, 0)");
  // the explicit witness: (-1, 0) lies in Q and -r + det A = 1 > 0 there, yet
  // it is a boundary jet of Q since A = 0
  const Jet2 ray{-1.0, Vec::Zero(2), SymMat::zero(2)};
  o.require(cone_Q().classify(ray).where == Location::Boundary && sum.op(ray) > 0.0, "(-1, 0, 0) is not a boundary jet with positive -r + det A");
  o.note("(-r det A, Q): " + std::to_string(good.checked) + " jets compatible; (-r + det A, Q): " + std::to_string(bad.failed()) +
         " failures, " + std::to_string(on_ray) + " witnesses in N x {0}");

  // n = 2: the special phase value is 0
  const auto crossing = fiber_special_lagrangian([](const Vec& x) { return x(0); }, Box::cube(2, -0.5, 0.5));
  const auto rep = check_fiberegularity(crossing, 0.1, {.points_per_dim = 11, .jets_per_point = 64, .max_eigenvalue = 1e6});
  o.require(rep.counterexample(), "phase crossing 0: no fiberegularity counterexample");
  const auto within = fiber_special_lagrangian([](const Vec& x) { return 0.5 + 0.1 * x(0); }, Box::cube(2, 0.2, 0.6));
  const auto ok = check_fiberegularity(within, 0.1, {.points_per_dim = 8, .jets_per_point = 64, .max_eigenvalue = 1e6});
  o.require(ok.delta > 0.0 && !ok.counterexample(), "phase inside (0, pi): no positive delta");
  o.note("phase x1 across 0: counterexample at the sample resolution; phase 0.5 + 0.1 x1: delta " + num(ok.delta));
  return o;
}

// ---------------------------------------------------------------------------

struct Verdicts {
  std::vector<int> flags;
  std::vector<double> t0;
  bool operator==(const Verdicts&) const = default;
};

Verdicts verdicts(const LevelSetDomain& dom, const FiberOracle& f) {
  Verdicts v;
  for (const auto& bp : sample_boundary_points(dom, 24, 808)) {
    const auto r = strict_pseudoconvex_at(f, bp);
    v.flags.push_back(r.strict);
    v.t0.push_back(r.t0);
  }
  return v;
}

bool all_of(const Verdicts& v, bool want) {
  return !v.flags.empty() && std::all_of(v.flags.begin(), v.flags.end(), [want](int f) { return f == want; });
}

Outcome criterion8() {
  Outcome o;
  o.require(strict_ellipticity_check(cone_P_dual(), 3).strict, "P~ is not strictly elliptic");
  for (int n = 2; n <= 4; ++n)
    for (int p = 1; p < n; ++p) {
      const auto rep = strict_ellipticity_check(cone_pfold(p), n);
      o.require(!rep.strict, "pfold:p=" + std::to_string(p) + " strictly elliptic on R^" + std::to_string(n));
    }
  o.note("P~ strictly elliptic; pfold:p for 1 <= p < n (n = 2..4) not strictly elliptic");

  const auto sphere = sphere_domain(3), slab = slab_face_domain(3), saddle = saddle_domain();
  const Verdicts sp = verdicts(sphere, cone_P());
  o.require(all_of(sp, true), "sphere + P: not all yes");
  o.require(*std::max_element(sp.t0.begin(), sp.t0.end()) <= 1e-6, "sphere + P: t0 does not tend to 0");
  for (int p = 1; p <= 3; ++p) o.require(all_of(verdicts(sphere, cone_pfold(p)), true), "sphere + pfold:p=" + std::to_string(p) + ": not all yes");
  o.require(all_of(verdicts(sphere, cone_P_dual()), true), "sphere + P~: not all yes");
  o.require(all_of(verdicts(slab, cone_P()), false), "slab + P: not all no");
  o.require(all_of(verdicts(saddle, cone_P()), false), "saddle + P: not all no");
  const auto origin = boundary_point(saddle, Vec::Zero(3));
  const auto planes = sample_planes(3, 2, 256, 809);
  o.require(!strict_pseudoconvex_at(cone_pfold(2), origin).strict && !geometric_pseudoconvex_at(planes, origin),
            "saddle at the origin: pfold:p=2 or the 2-plane trace test says yes");
  int agree = 0, sampled = 0;
  for (const auto* dom : {&sphere, &saddle})
    for (const auto& bp : sample_boundary_points(*dom, 24, 808)) {
      ++sampled;
      agree += strict_pseudoconvex_at(cone_pfold(2), bp).strict == geometric_pseudoconvex_at(planes, bp);
    }
  o.require(agree == sampled, "pfold:p=2 and 2-plane traces disagree at " + std::to_string(sampled - agree) + " points");
  const bool repeatable = verdicts(sphere, cone_pfold(2)) == verdicts(sphere, cone_pfold(2)) && verdicts(saddle, cone_P()) == verdicts(saddle, cone_P());
  o.require(repeatable, "verdicts differ between runs");
  o.note("sphere yes (P, pfold 1..3, P~), slab no (P), saddle no (P; pfold:p=2 at the origin), pfold:p=2 matches 2-plane traces, repeatable");
  return o;
}

// The p = n member of the pfold family is the trace cone; every rank-one
// projector has trace 1 and sits in its interior.
Outcome criterion8_full_pfold() {
  Outcome o;
  for (int n = 2; n <= 4; ++n) {
    const auto rep = strict_ellipticity_check(cone_pfold(n), n);
    o.require(!rep.strict, "pfold:p=" + std::to_string(n) + " on R^" + std::to_string(n) + " is strictly elliptic (smallest value at P_e: " + num(rep.worst) + ")");
  }
  return o;
}

// ---------------------------------------------------------------------------

GridFunction brute_sup(const GridFunction& u, double eps) {
  const Grid& g = u.grid;
  GridFunction out(g);
  for (int i = 0; i < g.size(); ++i) {
    const Vec x = g.x(i);
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < g.size(); ++k) best = std::max(best, u[k] - (g.x(k) - x).squaredNorm() / (2.0 * eps));
    out[i] = best;
  }
  return out;
}

ScalarField nonsmooth(Sampler& s, int n) {
  const Vec a = s.gaussian_vec(n), b = s.gaussian_vec(n);
  const double c = s.uniform(-1.0, 1.0), w = s.uniform(2.0, 8.0), r = s.uniform(0.2, 0.6);
  return [=](const Vec& x) {
    const double kink = std::abs(a.dot(x) - c);
    const double cone = -std::abs((x - Vec::Constant(n, 0.5)).norm() - r);
    return kink + 0.5 * cone + 0.2 * std::sin(w * b.dot(x)) - std::max(0.0, x(0) - 0.5);
  };
}

Outcome criterion9() {
  Outcome o;
  Sampler s(909);
  const std::vector<double> eps{0.002, 0.01, 0.05};
  for (const Grid& g : {Grid::cube(1, 0, 1, 129), Grid::cube(2, 0, 1, 65)}) {
    double worst_qc = std::numeric_limits<double>::infinity(), worst_oracle = 0.0;
    for (int t = 0; t < 5; ++t) {
      const auto u = GridFunction::sample(g, nonsmooth(s, g.dim()));
      std::vector<GridFunction> us;
      for (double e : eps) us.push_back(sup_convolution(u, e));
      for (std::size_t i = 0; i < eps.size(); ++i) {
        const auto& ue = us[i];
        bool dominates = true;
        for (int k = 0; k < g.size(); ++k) dominates = dominates && ue[k] >= u[k];
        o.require(dominates, "u^eps < u somewhere");
        if (i > 0) {
          bool monotone = true;
          for (int k = 0; k < g.size(); ++k) monotone = monotone && us[i - 1][k] <= ue[k];
          o.require(monotone, "u^eps not monotone in eps");
        }
        // second differences of u^eps + |x|^2 / 2 eps along every stencil direction
        GridFunction w = ue;
        for (int k = 0; k < g.size(); ++k) w[k] += 0.5 * g.x(k).squaredNorm() / eps[i];
        for (int k = 0; k < g.size(); ++k)
          for (const Offset& off : g.stencil()) {
            const int a = g.shift(k, off, 1), b = g.shift(k, off, -1);
            if (a < 0 || b < 0) continue;
            const double len = g.h() * g.offset_length(off);
            worst_qc = std::min(worst_qc, (w[a] + w[b] - 2.0 * w[k]) / (len * len));
          }
        if (g.dim() == 1 || t == 0) worst_oracle = std::max(worst_oracle, ue.max_abs_diff(brute_sup(u, eps[i])));
      }
    }
    o.require(worst_qc >= -1e-8, std::to_string(g.dim()) + "-D: quasiconvexity defect " + num(worst_qc));
    o.require(worst_oracle <= 1e-12, std::to_string(g.dim()) + "-D: brute-force sup differs by " + num(worst_oracle));
    o.note(std::to_string(g.size()) + " nodes: smallest second difference " + num(worst_qc) + ", brute-force agreement " + num(worst_oracle));
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::tuple<std::string, std::string, std::function<Outcome()>>> criteria{
      {"1", "Garding identities", criterion1},
      {"2", "duality involution and closed-form duals", criterion2},
      {"3", "canonical operators", criterion3},
      {"4", "solver exactness on 65^2", criterion4},
      {"5", "discrete comparison and scheme monotonicity", criterion5},
      {"6", "zero maximum principle for dual monotonicity cones", criterion6},
      {"7", "compatibility controls and special Lagrangian fiberegularity", criterion7},
      {"8", "pseudoconvexity dichotomy (P~, pfold p < n, test domains)", criterion8},
      {"8b", "pseudoconvexity dichotomy: pfold p = n not strictly elliptic", criterion8_full_pfold},
      {"9", "sup-convolution", criterion9},
  };
  std::vector<std::string> wanted(argv + 1, argv + argc);
  bool all_pass = true;
  int ran = 0;
  for (const auto& [id, title, run] : criteria) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), id) == wanted.end()) continue;
    ++ran;
    const auto t0 = Clock::now();
    Outcome out;
    try {
      out = run();
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    all_pass = all_pass && out.pass;
    std::cout << (out.pass ? "[PASS] " : "[FAIL] ") << "criterion " << id << ": " << title << " (" << num(seconds_since(t0)) << " s)" << out.log.str()
              << std::endl;
  }
  if (ran == 0) {
    std::cerr << "unknown criterion\n";
    return 2;
  }
  return all_pass ? 0 : 1;
}
