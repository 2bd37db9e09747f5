#include <gtest/gtest.h>

#include "npt/boundary.hpp"

using namespace npt;

namespace {

Vec v3(double a, double b, double c) { return (Vec(3) << a, b, c).finished(); }
Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

std::vector<LevelSetDomain> test_domains() {
  return {sphere_domain(3), ellipsoid_domain(v3(1.0, 2.0, 0.5)), saddle_domain(), cylinder_domain(), slab_face_domain(3)};
}

}  // namespace

TEST(BoundaryPoint, SphereHasUnitCurvatures) {
  const auto dom = sphere_domain(3);
  for (const auto& bp : sample_boundary_points(dom, 50)) {
    EXPECT_LE((bp.curvatures.array() - 1.0).abs().maxCoeff(), 1e-10);
    EXPECT_LE((bp.A.matrix() - (Mat::Identity(3, 3) - bp.e * bp.e.transpose())).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(BoundaryPoint, SlabFaceIsFlat) {
  const auto bp = boundary_point(slab_face_domain(2), v2(1.0, 0.3));
  EXPECT_LE(bp.A.matrix().cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(bp.e(0), -1.0, 1e-15);
}

TEST(BoundaryPoint, EllipseCurvatures) {
  const auto dom = ellipsoid_domain(v2(2.0, 1.0));
  // conic curvature: a / b^2 at the end of the major axis, b / a^2 at the end of the minor one
  EXPECT_NEAR(boundary_point(dom, v2(2.0, 0.0)).curvatures(0), 2.0, 1e-12);
  EXPECT_NEAR(boundary_point(dom, v2(0.0, 1.0)).curvatures(0), 0.25, 1e-12);
  // finite-difference normal turning at a generic point
  const double t = 0.7;
  const Vec x = v2(2.0 * std::cos(t), std::sin(t));
  const double h = 1e-5;
  const Vec xp = v2(2.0 * std::cos(t + h), std::sin(t + h)), xm = v2(2.0 * std::cos(t - h), std::sin(t - h));
  const Vec ep = boundary_point(dom, xp).e, em = boundary_point(dom, xm).e;
  const double turning = std::acos(std::clamp(ep.dot(em), -1.0, 1.0)) / (xp - xm).norm();
  EXPECT_NEAR(boundary_point(dom, x).curvatures(0), turning, 1e-6);
}

TEST(BoundaryPoint, Invariants) {
  for (const auto& dom : test_domains()) {
    EXPECT_TRUE(check_derivatives(dom).ok()) << dom.label;
    for (const auto& bp : sample_boundary_points(dom, 30)) {
      EXPECT_LT(dom.phi(bp.x + 1e-4 * bp.e), 0.0) << dom.label;
      EXPECT_LE((bp.A.matrix() * bp.e).norm(), 1e-12) << dom.label;
      EXPECT_LE((bp.tangent_frame.transpose() * bp.e).norm(), 1e-12) << dom.label;
    }
  }
}

TEST(BoundaryPoint, Errors) {
  const auto dom = sphere_domain(2);
  EXPECT_THROW(boundary_point(dom, v2(0.5, 0.0)), Error);
  const LevelSetDomain cone{"cone", [](const Vec& x) { return x.squaredNorm(); }, [](const Vec& x) { return Vec(2.0 * x); },
                            [](const Vec&) { return 2.0 * SymMat::identity(2); }, Box::cube(2, -1, 1)};
  try {
    boundary_point(cone, Vec::Zero(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularGradient);
  }
}

TEST(Pseudoconvexity, Examples) {
  const auto sphere = sample_boundary_points(sphere_domain(3), 20);
  for (const auto& bp : sphere) {
    const auto v = strict_pseudoconvex_at(cone_P(), bp);
    EXPECT_TRUE(v.strict);
    EXPECT_LE(v.t0, 1e-6);
    for (int p = 1; p <= 3; ++p) EXPECT_TRUE(strict_pseudoconvex_at(cone_pfold(p), bp).strict);
  }
  const auto slab = boundary_point(slab_face_domain(3), v3(1.0, 0.2, -0.4));
  for (double cap : {1.0, 1e3, 1e6}) EXPECT_FALSE(strict_pseudoconvex_at(cone_P(), slab, cap).strict);
}

TEST(Pseudoconvexity, MonotoneInT) {
  Sampler s(61);
  for (const auto& dom : test_domains())
    for (const auto& bp : sample_boundary_points(dom, 10))
      for (const auto& f : {cone_P(), cone_pfold(2), cone_pucci(1, 2)}) {
        const SymMat pe = SymMat::projector(bp.e);
        bool inside = false;
        for (double t = 0.0; t < 100.0; t += s.uniform(0.0, 5.0)) {
          const bool now = f.value(Jet2::hessian(bp.A + t * pe)) > kDefaultTol;
          EXPECT_TRUE(now || !inside) << dom.label << " " << f.label();
          inside = now;
        }
      }
}

TEST(StrictEllipticity, Examples) {
  EXPECT_TRUE(strict_ellipticity_check(cone_P_dual(), 3).strict);
  const auto p = strict_ellipticity_check(cone_P(), 3);
  EXPECT_FALSE(p.strict);
  EXPECT_NEAR(p.worst, 0.0, 1e-12);
  for (int n = 2; n <= 5; ++n)
    for (int k = 1; k < n; ++k) EXPECT_FALSE(strict_ellipticity_check(cone_pfold(k), n).strict) << n << " " << k;
  // p = n is the trace cone, where P_e has trace 1
  EXPECT_TRUE(strict_ellipticity_check(cone_pfold(3), 3).strict);
  EXPECT_TRUE(strict_ellipticity_check(cone_pucci(1, 2), 3).strict);
}

TEST(StrictEllipticity, ImpliesPseudoconvexEverywhere) {
  for (const auto& f : {cone_P_dual(), cone_pfold(3), cone_pucci(1, 2), cone_sigma_k(1)}) {
    ASSERT_TRUE(strict_ellipticity_check(f, 3).strict) << f.label();
    for (const auto& dom : test_domains())
      for (const auto& bp : sample_boundary_points(dom, 20)) EXPECT_TRUE(strict_pseudoconvex_at(f, bp).strict) << f.label() << " " << dom.label;
  }
}

TEST(GeometricPseudoconvexity, Examples) {
  const auto planes = sample_planes(3, 2, 200);
  for (const auto& bp : sample_boundary_points(sphere_domain(3), 10)) EXPECT_TRUE(geometric_pseudoconvex_at(planes, bp));
  EXPECT_TRUE(geometric_pseudoconvex_at(planes, boundary_point(cylinder_domain(), v3(1.0, 0.0, 0.3))));
  EXPECT_FALSE(geometric_pseudoconvex_at(planes, boundary_point(saddle_domain(), Vec::Zero(3))));
}

TEST(GeometricPseudoconvexity, AgreesWithPfold) {
  for (const auto& dom : {sphere_domain(3), ellipsoid_domain(v3(1.0, 2.0, 0.5)), saddle_domain()})
    for (int p = 1; p <= 3; ++p) {
      const auto planes = sample_planes(3, p, 64, 100 + p);
      for (const auto& bp : sample_boundary_points(dom, 20))
        EXPECT_EQ(strict_pseudoconvex_at(cone_pfold(p), bp).strict, geometric_pseudoconvex_at(planes, bp)) << dom.label << " p=" << p;
    }
}
