#pragma once

// The fundamental family of monotonicity cones
//   M(gamma, D, R) = { (r, p, A) : r <= -gamma |p|, p in D, A >= (|p| / R) I }.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "npt/fiber.hpp"
#include "npt/format.hpp"

namespace npt {

/// Closed convex directional cone D in the gradient slot.
class DirectionalCone {
 public:
  enum class Kind { FullSpace, Halfspace, Orthant };

  static DirectionalCone full() { return DirectionalCone(Kind::FullSpace, 0, 1, {}); }
  /// {p : sign * p_axis >= 0}, axis 0-based.
  static DirectionalCone halfspace(int axis, int sign = 1) { return DirectionalCone(Kind::Halfspace, axis, sign >= 0 ? 1 : -1, {}); }
  /// {p : p_j >= 0 for j in axes}, axes 0-based.
  static DirectionalCone orthant(std::vector<int> axes) {
    if (axes.empty()) fail(ErrorCode::BadParameters, "orthant needs at least one axis");
    std::sort(axes.begin(), axes.end());
    axes.erase(std::unique(axes.begin(), axes.end()), axes.end());
    return DirectionalCone(Kind::Orthant, 0, 1, std::move(axes));
  }

  Kind kind() const { return kind_; }

  /// >= 0 iff p in D; +inf for the full space.
  double value(const Vec& p) const {
    switch (kind_) {
      case Kind::FullSpace: return std::numeric_limits<double>::infinity();
      case Kind::Halfspace: check(p, axis_); return sign_ * p(axis_);
      case Kind::Orthant: {
        double v = std::numeric_limits<double>::infinity();
        for (int a : axes_) {
          check(p, a);
          v = std::min(v, p(a));
        }
        return v;
      }
    }
    return 0.0;
  }

  /// A vector in the interior of D.
  Vec interior_point(int n) const {
    Vec d = Vec::Zero(n);
    switch (kind_) {
      case Kind::FullSpace: break;
      case Kind::Halfspace: check_dim(n, axis_); d(axis_) = sign_; break;
      case Kind::Orthant:
        for (int a : axes_) {
          check_dim(n, a);
          d(a) = 1.0;
        }
        d /= d.norm();
        break;
    }
    return d;
  }

  /// "full", "half:e1", "half:-e2", "orthant:1+2" (axes 1-based in keys).
  std::string key() const {
    switch (kind_) {
      case Kind::FullSpace: return "full";
      case Kind::Halfspace: return std::string("half:") + (sign_ < 0 ? "-" : "") + "e" + std::to_string(axis_ + 1);
      case Kind::Orthant: {
        std::string s = "orthant:";
        for (std::size_t i = 0; i < axes_.size(); ++i) s += (i ? "+" : "") + std::to_string(axes_[i] + 1);
        return s;
      }
    }
    return "?";
  }

  friend bool operator==(const DirectionalCone&, const DirectionalCone&) = default;

 private:
  DirectionalCone(Kind k, int axis, int sign, std::vector<int> axes) : kind_(k), axis_(axis), sign_(sign), axes_(std::move(axes)) {}

  static void check(const Vec& p, int axis) { check_dim(static_cast<int>(p.size()), axis); }
  static void check_dim(int n, int axis) {
    if (axis < 0 || axis >= n) fail(ErrorCode::IndexOutOfRange, "cone axis " + std::to_string(axis + 1) + " outside dimension " + std::to_string(n));
  }

  Kind kind_;
  int axis_;
  int sign_;
  std::vector<int> axes_;
};

/// Hessian radius R in (0, +inf]; +inf is its own state, not a large float.
class HessianRadius {
 public:
  static HessianRadius infinite() { return HessianRadius(true, 0.0); }
  static HessianRadius finite(double r) {
    if (!(r > 0.0) || !std::isfinite(r)) fail(ErrorCode::BadParameters, "R must be a positive finite number or infinite()");
    return HessianRadius(false, r);
  }

  bool is_infinite() const { return infinite_; }
  double value() const { return infinite_ ? std::numeric_limits<double>::infinity() : r_; }
  /// |p| / R, zero when R is infinite.
  double slope(double pnorm) const { return infinite_ ? 0.0 : pnorm / r_; }

  friend bool operator==(const HessianRadius&, const HessianRadius&) = default;

 private:
  HessianRadius(bool inf, double r) : infinite_(inf), r_(r) {}
  bool infinite_;
  double r_;
};

struct MonotonicityCone {
  double gamma = 0.0;
  DirectionalCone D = DirectionalCone::full();
  HessianRadius R = HessianRadius::infinite();

  MonotonicityCone() = default;
  MonotonicityCone(double g, DirectionalCone d, HessianRadius r) : gamma(g), D(std::move(d)), R(r) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) fail(ErrorCode::BadParameters, "gamma must be finite and >= 0");
  }

  /// min(-r - gamma|p|, D(p), lambda_min(A) - |p|/R).
  double value(const Jet2& j) const {
    const double pn = j.p.norm();
    return std::min({-j.r - gamma * pn, D.value(j.p), lambda_min(j.A) - R.slope(pn)});
  }

  /// "M:gamma=1,D=half:e1,R=inf".
  std::string key() const {
    return "M:gamma=" + format_number(gamma) + ",D=" + D.key() + ",R=" + (R.is_infinite() ? std::string("inf") : format_number(R.value()));
  }

  /// A jet in Int M: (-(1 + gamma |d|), d, (1 + |d|/R) I) with d interior to D.
  Jet2 interior_jet(int n) const {
    Vec d = 0.5 * D.interior_point(n);
    const double dn = d.norm();
    return {-(1.0 + gamma * dn), d, SymMat::identity(n).shifted(R.slope(dn))};
  }
};

inline FiberOracle cone_M(const MonotonicityCone& m) {
  std::string text = "r <= -" + format_number(m.gamma) + "|p|, p in " + m.D.key() + ", A >= (|p|/" +
                     (m.R.is_infinite() ? std::string("inf") : format_number(m.R.value())) + ") I";
  return FiberOracle(Arity::Full, m.key(), text, [m](const Jet2& j) { return m.value(j); });
}

/// M0 = N x {0} x P.
inline FiberOracle cone_M0() {
  return FiberOracle(Arity::Full, "M0", "r <= 0, p = 0, A >= 0",
                     [](const Jet2& j) { return std::min({-j.r, -j.p.norm(), lambda_min(j.A)}); });
}

}  // namespace npt
