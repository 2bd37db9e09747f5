#pragma once

// Property suites behind `npt check <suite>`.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "npt/npt.hpp"

namespace npt::cli {

struct SuiteLine {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteOptions {
  std::uint64_t seed = kDefaultSeed;
  int threads = 1;
  double tol = kDefaultTol;
  int samples = 0;  // 0: the suite default
};

inline int samples_or(const SuiteOptions& o, int fallback) { return o.samples > 0 ? o.samples : fallback; }

inline std::vector<SuiteLine> suite_duality_involution(const SuiteOptions& o) {
  const int samples = samples_or(o, 10000);
  std::vector<std::pair<FiberOracle, int>> fibers;
  for (const auto& e : catalog_entries()) {
    if (std::find(e.kinds.begin(), e.kinds.end(), EntryKind::Fiber) == e.kinds.end()) continue;
    const FiberOracle f = fiber_from_key(e.example);
    fibers.push_back({f, f.label() == "lagrangian" ? 4 : 3});
  }
  std::vector<SuiteLine> out;
  for (const auto& [f, n] : fibers) {
    const auto rep = check_involution(f, n, samples, o.seed, o.tol);
    out.push_back({"involution " + f.label(), rep.ok(),
                   std::to_string(rep.failed()) + " disagreements in " + std::to_string(rep.checked) + " (" + std::to_string(rep.excluded_boundary) + " in the boundary band)"});
  }
  Sampler s(o.seed);
  long mismatches = 0;
  const FiberOracle pd = dual(cone_P()), qd = dual(cone_Q());
  for (int i = 0; i < samples; ++i) {
    const Jet2 j = sample_jet(s, 3, Arity::Full, s.log_uniform(1e-3, 10.0));
    if (pd.contains(j, 0.0) != cone_P_dual().contains(j, 0.0)) ++mismatches;
    if (qd.contains(j, 0.0) != cone_Q_dual().contains(j, 0.0)) ++mismatches;
  }
  out.push_back({"closed-form duals P~ Q~", mismatches == 0, std::to_string(mismatches) + " mismatches in " + std::to_string(2 * samples)});
  return out;
}

inline std::vector<SuiteLine> suite_garding_identities(const SuiteOptions& o) {
  const int samples = samples_or(o, 1000);
  std::vector<GardingOperator> ops{op_det(3), op_delta_elliptic(3, 0.1), op_delta_elliptic(3, 1.0), op_sigma(4, 2), op_lagrangian_ma(2),
                                   op_pucci_garding(1, 2, 3)};
  for (int n = 1; n <= 5; ++n)
    for (int p = 1; p <= n; ++p) ops.push_back(op_pfold(n, p));
  std::vector<SuiteLine> out;
  for (const auto& op : ops) {
    Sampler s(o.seed);
    double worst_product = 0.0, worst_shift = 0.0, worst_imag = 0.0;
    int product_failures = 0;
    for (int i = 0; i < samples; ++i) {
      const SymMat a = s.symmetric(op.dim(), s.log_uniform(1e-1, 1e1));
      const double t = s.uniform(-2.0, 2.0);
      const GardingRoots r = garding_roots(op, a);
      worst_imag = std::max(worst_imag, r.imag_residue / (1.0 + spectral_norm(a)));
      double prod = op.eval_identity();
      for (double l : r.values) prod *= l;
      const double v = op(a);
      if (std::abs(v - prod) > 1e-7 * std::abs(v) + 1e-12) ++product_failures;
      if (std::abs(v) > 1e-12) worst_product = std::max(worst_product, std::abs(v - prod) / std::abs(v));
      const Eigen::VectorXd shifted = garding_eigenvalues(op, a.shifted(t));
      worst_shift = std::max(worst_shift, (shifted - r.values - Eigen::VectorXd::Constant(r.values.size(), t)).cwiseAbs().maxCoeff());
    }
    const bool pass = worst_imag < 1e-7 && product_failures == 0 && worst_shift <= 1e-8;
    out.push_back({op.label() + " n=" + std::to_string(op.dim()), pass,
                   "imag " + format_number(worst_imag) + ", product " + format_number(worst_product) + ", shift " + format_number(worst_shift)});
  }
  return out;
}

inline std::vector<SuiteLine> suite_monotonicity(const SuiteOptions& o) {
  std::vector<SuiteLine> out;
  const FiberOracle m0 = cone_M0();
  for (const auto& e : catalog_entries()) {
    if (std::find(e.kinds.begin(), e.kinds.end(), EntryKind::Fiber) == e.kinds.end()) continue;
    if (e.pattern.rfind("failure", 0) == 0) continue;
    const FiberOracle f = fiber_from_key(e.example);
    const auto rep = check_monotonicity(f, m0, f.label() == "lagrangian" ? 4 : 3, samples_or(o, 2000), o.seed, o.tol);
    out.push_back({"F + M0 in F for " + f.label(), rep.ok(), std::to_string(rep.failed()) + " failures in " + std::to_string(rep.checked)});
  }
  for (const auto& [key, n] : std::vector<std::pair<std::string, int>>{{"P", 2}, {"P~", 2}, {"branch:k=2", 2}, {"pfold:p=2", 3}, {"pucci:1,2", 2}, {"slag", 2}}) {
    const SchemeEvaluator ev(scheme_from_key(key, n), Grid::cube(n, 0, 1, n == 2 ? 9 : 7));
    const auto rep = check_scheme_monotone(ev, samples_or(o, 1000), o.seed);
    out.push_back({"scheme update monotone " + key, rep.ok(), std::to_string(rep.failed()) + " failures in " + std::to_string(rep.checked)});
  }
  return out;
}

inline ScalarField seeded_boundary_data(Sampler& s, int n) {
  Vec k = s.gaussian_vec(n) * 2.0;
  const double a = s.uniform(-1.0, 1.0), b = s.uniform(-1.0, 1.0), phase = s.uniform(0.0, 6.0);
  return [=](const Vec& x) { return a * x.squaredNorm() + b * x(0) + std::sin(k.dot(x) + phase); };
}

inline std::vector<SuiteLine> suite_comparison(const SuiteOptions& o) {
  std::vector<SuiteLine> out;
  Sampler s(o.seed);
  const std::vector<std::tuple<std::string, int, double>> cases{{"P", 2, 0.5}, {"branch:k=2", 2, 0.5}, {"pucci:1,2", 2, 0.3}, {"pfold:p=2", 3, 0.2}};
  const int pairs = samples_or(o, 10);
  for (const auto& [key, n, level] : cases) {
    const SchemeEvaluator ev(scheme_from_key(key, n), Grid::cube(n, 0, 1, n == 2 ? 17 : 9));
    const ScalarField psi = [c = level](const Vec&) { return c; };
    SolveOptions opt;
    opt.threads = o.threads;
    int held = 0;
    double worst = -std::numeric_limits<double>::infinity();
    for (int t = 0; t < pairs; ++t) {
      const ScalarField g1 = seeded_boundary_data(s, n);
      const ScalarField bump = seeded_boundary_data(s, n);
      const double lift = s.uniform(0.0, 0.5);
      const ScalarField g2 = [g1, bump, lift](const Vec& x) { return g1(x) + lift + 0.5 * (1.0 + std::tanh(bump(x))); };
      const auto u = solve_dirichlet(ev, psi, g1, opt);
      const auto w = solve_dirichlet(ev, psi, g2, opt);
      const auto v = scheme_comparison_experiment(ev, psi, u.u, w.u, 1e-9, 1e-7);
      held += v.holds;
      worst = std::max(worst, v.max_gap);
    }
    out.push_back({"comparison " + key + " n=" + std::to_string(n), held == pairs,
                   std::to_string(held) + "/" + std::to_string(pairs) + " pairs ordered, max gap " + format_number(worst)});
  }
  return out;
}

inline std::vector<SuiteLine> suite_utp(const SuiteOptions&) {
  std::vector<SuiteLine> out;
  const Grid g = Grid::cube(2, 0, 1, 17);
  {
    const auto fibers = constant_fiber_map(cone_P(), g.box());
    const auto u = GridFunction::sample(g, [](const Vec& x) { return x(0) * x(0) + std::exp(x(1)); });
    const auto psi = GridFunction::sample(g, strict_approximator(fibers.monotonicity, g.box())->value);
    const auto rep = uniform_translation_probe(u, fibers, psi, 0.0, 0.25);
    out.push_back({"constant fiber P, theta=0", rep.all_passed(), "delta " + format_number(rep.delta) + " over " + std::to_string(rep.translates) + " translates"});
  }
  const auto fibers = fiber_perturbed_MA([](const Vec& x) { return SymMat::diag({0.0, 1.0 / (1.0 + x(0))}); }, [](const Vec&) { return 1.0; }, g.box());
  const auto u = GridFunction::sample(g, [](const Vec& x) { return x(0) * x(0) * x(0) / 6.0 + 0.5 * x(0) * x(0); });
  const auto psi = GridFunction::sample(g, strict_approximator(fibers.monotonicity, g.box())->value);
  const auto perturbed = uniform_translation_probe(u, fibers, psi, 0.1, 0.25);
  out.push_back({"perturbed MA, theta=0.1", perturbed.delta > g.h(), "delta " + format_number(perturbed.delta) + " (h = " + format_number(g.h()) + ")"});
  const auto bare = uniform_translation_probe(u, fibers, psi, 0.0, 0.25);
  out.push_back({"perturbed MA, theta=0 fails", !bare.all_passed(), std::to_string(bare.failures) + " failing translates"});
  return out;
}

inline const std::map<std::string, std::function<std::vector<SuiteLine>(const SuiteOptions&)>>& suites() {
  static const std::map<std::string, std::function<std::vector<SuiteLine>(const SuiteOptions&)>> all{
      {"duality-involution", suite_duality_involution},
      {"garding-identities", suite_garding_identities},
      {"monotonicity", suite_monotonicity},
      {"comparison", suite_comparison},
      {"utp", suite_utp},
  };
  return all;
}

}  // namespace npt::cli
