#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "npt/canonical.hpp"

using namespace npt;

namespace {

// mean of the p smallest diagonal entries of the eigenvalue-diagonalized matrix,
// found by an independent bisection on t -> sum_{i<=p} (lambda_i - t)
double pfold_shift_oracle(const Vec& lam, int p) {
  double lo = lam.minCoeff() - 1.0, hi = lam.maxCoeff() + 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((lam.head(p).array() - mid).sum() >= 0.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double det2(const Jet2& j) { return j.A.matrix().determinant(); }

OperatorPair product_pair() { return {"-r det A", [](const Jet2& j) { return -j.r * det2(j); }, cone_Q(), 3}; }
OperatorPair sum_pair() { return {"-r + det A", [](const Jet2& j) { return -j.r + det2(j); }, cone_Q(), 2}; }

}  // namespace

TEST(Canonical, Examples) {
  EXPECT_NEAR(canonical_operator(cone_P(), SymMat::diag({2, 5})), 2.0, 1e-12);
  EXPECT_NEAR(canonical_operator(cone_pfold(2), SymMat::diag({1, 2, 3})), 1.5, 1e-12);
  for (const auto& f : {cone_P(), cone_P_dual(), branch(2), cone_pfold(2), cone_sigma_k(2), cone_pucci(1, 2), cone_quasiconvex(0.0),
                        cone_lagrangian()})
    for (double t : {-3.0, 0.0, 0.5, 7.0}) EXPECT_NEAR(canonical_operator(f, SymMat::identity(4).shifted(t - 1.0)), t, 1e-11) << f.label();
}

TEST(Canonical, BracketingFailure) {
  const FiberOracle empty(Arity::PureSecondOrder, "empty", "never", [](const Jet2&) { return -1.0; });
  const FiberOracle all(Arity::PureSecondOrder, "all", "always", [](const Jet2&) { return 1.0; });
  for (const auto& f : {empty, all}) {
    try {
      canonical_operator(f, SymMat::identity(2));
      FAIL() << f.label();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::BracketingFailure);
    }
  }
}

TEST(Canonical, ConvexityAndPfoldValues) {
  Sampler s(51);
  for (int i = 0; i < 2000; ++i) {
    const int n = s.integer(1, 6);
    const SymMat a = s.symmetric(n, s.log_uniform(1e-2, 1e2));
    const Vec lam = eigenvalues(a);
    EXPECT_NEAR(canonical_operator(cone_P(), a), lam(0), 1e-9 * (1.0 + spectral_norm(a)));
    const int p = s.integer(1, n);
    const double c = canonical_operator(cone_pfold(p), a);
    EXPECT_NEAR(c, pfold_shift_oracle(lam, p), 1e-9 * (1.0 + spectral_norm(a)));
    // the native operator lambda_1 + ... + lambda_p is p times the c = 1 one
    EXPECT_NEAR(p * c, cone_pfold(p).value(Jet2::hessian(a)), 1e-8 * (1.0 + spectral_norm(a)));
  }
}

TEST(Canonical, NormalizationInvariants) {
  Sampler s(52);
  for (const auto& f : {cone_P(), cone_pfold(2), cone_pucci(1, 3), cone_sigma_k(2), branch(2)}) {
    for (int i = 0; i < 300; ++i) {
      const SymMat a = s.symmetric(3);
      const double c = canonical_operator(f, a);
      const SymMat p = s.psd(3, s.integer(1, 3));
      EXPECT_GE(canonical_operator(f, a + p), c - 1e-9) << f.label();
      const double t = s.uniform(-5, 5);
      EXPECT_NEAR(canonical_operator(f, a.shifted(t)), c + t, 1e-9 * (1.0 + std::abs(t))) << f.label();
    }
  }
}

TEST(Canonical, PucciSignAgreement) {
  Sampler s(53);
  const auto f = cone_pucci(1, 2);
  for (int i = 0; i < 2000; ++i) {
    const SymMat a = s.symmetric(3);
    const double v = pucci_value(eigenvalues(a), 1, 2);
    if (std::abs(v) <= kDefaultTol) continue;
    const double c = canonical_operator(f, a);
    EXPECT_EQ(c > 0.0, v > 0.0);
  }
}

TEST(SignedDistance, Examples) {
  const auto p = cone_P();
  const double d = signed_distance(p, Jet2::hessian(SymMat::diag({-3, 1})));
  EXPECT_NEAR(d, -3.0, 1e-9);
  EXPECT_NEAR(signed_distance(p, Jet2::hessian(SymMat::identity(3))), 1.0, 1e-9);
  EXPECT_EQ(signed_distance(p, Jet2::hessian(SymMat::diag({0, 2}))), 0.0);
}

TEST(SignedDistance, MatchesSpectralDistanceAndRefinesMonotonically) {
  Sampler s(54);
  const auto p = cone_P();
  for (int i = 0; i < 100; ++i) {
    const Jet2 j = Jet2::hessian(s.symmetric(3));
    const double exact = lambda_min(j.A);  // distance to the boundary of P in the spectral norm
    double prev = std::numeric_limits<double>::infinity();
    for (int k : {2, 16, 64, 256}) {
      const double d = signed_distance(p, j, k);
      EXPECT_EQ(d > 0.0, p.value(j) > 0.0);
      EXPECT_LE(std::abs(d), prev + 1e-12);
      EXPECT_GE(std::abs(d), std::abs(exact) - 1e-9);
      prev = std::abs(d);
    }
    EXPECT_NEAR(prev, std::abs(exact), 1e-9);
  }
  for (const auto& f : {cone_pucci(1, 2), cone_Q(), cone_lagrangian()}) {
    for (int i = 0; i < 200; ++i) {
      const int n = f.label() == "lagrangian" ? 4 : 3;
      const Jet2 j = sample_jet(s, n, f.arity());
      const double v = f.value(j);
      if (std::abs(v) <= kDefaultTol) continue;
      EXPECT_EQ(signed_distance(f, j, 32) > 0.0, v > 0.0) << f.label();
    }
  }
}

TEST(ProperEllipticity, Examples) {
  const OperatorPair det_on_p{"det", det2, cone_P(), 2};
  EXPECT_TRUE(check_proper_elliptic(det_on_p, 2, 3000).ok());
  EXPECT_TRUE(check_proper_elliptic(product_pair(), 2, 3000).ok());
  const OperatorPair det_everywhere{"det", det2, whole_space(), 2};
  const auto rep = check_proper_elliptic(det_everywhere, 2, 3000);
  EXPECT_GT(rep.failed(), 0);
  // the explicit witness: adding diag(1, 0) to diag(-1, -1) lowers det from 1 to 0
  EXPECT_LT(det2(Jet2::hessian(SymMat::diag({0, -1}))), det2(Jet2::hessian(SymMat::diag({-1, -1}))));
}

TEST(Compatibility, ProductPasses) {
  const auto pair = product_pair();
  const auto rep = check_compatibility(pair, induced_fiber(pair), 2, 4000);
  EXPECT_TRUE(rep.ok()) << rep.failed();
}

TEST(Compatibility, SumFailsOnNegativeRayTimesZero) {
  const auto pair = sum_pair();
  const auto rep = check_compatibility(pair, induced_fiber(pair), 2, 4000);
  EXPECT_GT(rep.failed(), 0);
  bool on_ray = false;
  for (const Jet2& w : rep.witnesses) on_ray = on_ray || (w.r < 0.0 && w.A.matrix().isZero(0.0));
  EXPECT_TRUE(on_ray);
}

TEST(Compatibility, CanonicalOfConvexity) {
  const OperatorPair pair{"canonical(P)", [](const Jet2& j) { return canonical_operator(cone_P(), j.A); }, whole_space(), 1};
  EXPECT_TRUE(check_compatibility(pair, cone_P(), 3, 2000).ok());
}

TEST(InducedFiber, IsASubequation) {
  const auto f = induced_fiber(product_pair());
  Sampler s(55);
  long checked = 0;
  for (int i = 0; i < 5000; ++i) {
    const Jet2 j = sample_member(f, s, 2);
    if (f.value(j) < 0.0) continue;
    ++checked;
    Jet2 k = j;
    k.A = k.A + s.psd(2);
    k.r -= s.uniform();
    EXPECT_GE(f.value(k), -kDefaultTol);
  }
  EXPECT_GT(checked, 2500);
}

TEST(Tameness, Examples) {
  const OperatorPair det_on_p{"det", det2, cone_P(), 2};
  EXPECT_TRUE(check_topological_tameness(det_on_p, {0.0, 0.5, 2.0}, 2, 300).ok());
  const OperatorPair zero{"0", [](const Jet2&) { return 0.0; }, cone_P(), 1};
  const auto rep = check_topological_tameness(zero, {0.0}, 2, 300);
  EXPECT_GT(rep.checked, 0);
  EXPECT_EQ(rep.passed, 0);
}

TEST(StrictMonotonicity, Examples) {
  const OperatorPair det_on_p{"det", det2, cone_P(), 2};
  const Jet2 i2 = Jet2::hessian(SymMat::identity(2));
  EXPECT_TRUE(check_strict_M_monotone(det_on_p, cone_P(), i2, 3000).ok());
  const OperatorPair slag{"slag", [](const Jet2& j) { return arctan_sum(j.A); }, whole_space(), 1};
  EXPECT_TRUE(check_strict_M_monotone(slag, cone_P(), Jet2::hessian(SymMat::identity(3)), 3000).ok());
  EXPECT_THROW(check_strict_M_monotone(det_on_p, cone_P(), Jet2::hessian(SymMat::diag({1, 0})), 10), Error);
}

TEST(Admissible, SubAndSuperTests) {
  const Grid g = Grid::cube(2, 0, 1, 17);
  const OperatorPair det_on_p{"det", det2, cone_P(), 2};
  const ScalarField one = [](const Vec&) { return 1.0; };
  const auto convex = GridFunction::sample(g, [](const Vec& x) { return 0.5 * x.squaredNorm(); });
  const auto concave = GridFunction::sample(g, [](const Vec& x) { return -0.5 * x.squaredNorm(); });
  for (int k = 0; k < g.size(); ++k) {
    if (!g.interior(k)) continue;
    EXPECT_TRUE(admissible_subsolution_test(det_on_p, convex, k, one));
    EXPECT_TRUE(admissible_supersolution_test(det_on_p, convex, k, one));
    EXPECT_FALSE(admissible_subsolution_test(det_on_p, concave, k, one));
    EXPECT_TRUE(admissible_supersolution_test(det_on_p, concave, k, one));
  }
  const auto affine = GridFunction::sample(g, [](const Vec& x) { return 1.0 + x(0) - 0.5 * x(1); });
  const int mid = g.node({8, 8, 0});
  EXPECT_FALSE(admissible_subsolution_test(product_pair(), affine, mid));
  EXPECT_THROW(admissible_subsolution_test(det_on_p, convex, 0, one), Error);
}
