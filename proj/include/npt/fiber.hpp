#pragma once

// Fiber oracles: membership classifiers for subsets of the 2-jet space
// that are described by a scalar defining functional (member iff >= 0).

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "npt/jets.hpp"

namespace npt {

inline constexpr double kDefaultTol = 1e-9;

/// Which jet slots a fiber reads.
enum class Arity {
  PureSecondOrder,  // A only
  GradientFree,     // (r, A)
  GradientHessian,  // (p, A)
  Full,             // (r, p, A)
};

constexpr std::string_view to_string(Arity a) {
  switch (a) {
    case Arity::PureSecondOrder: return "PureSecondOrder";
    case Arity::GradientFree: return "GradientFree";
    case Arity::GradientHessian: return "GradientHessian";
    case Arity::Full: return "Full";
  }
  return "?";
}

constexpr bool reads_value(Arity a) { return a == Arity::GradientFree || a == Arity::Full; }
constexpr bool reads_gradient(Arity a) { return a == Arity::GradientHessian || a == Arity::Full; }

/// Combined arity of two fibers (the union of the slots they read).
constexpr Arity join(Arity a, Arity b) {
  const bool r = reads_value(a) || reads_value(b);
  const bool p = reads_gradient(a) || reads_gradient(b);
  if (r && p) return Arity::Full;
  if (r) return Arity::GradientFree;
  if (p) return Arity::GradientHessian;
  return Arity::PureSecondOrder;
}

enum class Location { Interior, Boundary, Exterior };

constexpr std::string_view to_string(Location l) {
  switch (l) {
    case Location::Interior: return "Interior";
    case Location::Boundary: return "Boundary";
    case Location::Exterior: return "Exterior";
  }
  return "?";
}

/// Classification result. margin is |value| off the boundary band and 0 on it.
struct Region {
  Location where = Location::Exterior;
  double margin = 0.0;
  double value = 0.0;

  bool member() const { return where != Location::Exterior; }
  bool interior() const { return where == Location::Interior; }
};

inline Region classify_value(double v, double tol) {
  if (std::isnan(v)) return {Location::Exterior, 0.0, v};
  if (v > tol) return {Location::Interior, v, v};
  if (v < -tol) return {Location::Exterior, -v, v};
  return {Location::Boundary, 0.0, v};
}

class FiberOracle {
 public:
  using Functional = std::function<double(const Jet2&)>;

  FiberOracle() = default;
  FiberOracle(Arity arity, std::string label, std::string functional_text, Functional f)
      : arity_(arity),
        label_(std::move(label)),
        text_(std::move(functional_text)),
        f_(std::make_shared<const Functional>(std::move(f))) {}

  Arity arity() const { return arity_; }
  const std::string& label() const { return label_; }
  /// Human-readable defining inequality.
  const std::string& functional_text() const { return text_; }

  /// The defining functional; the fiber is {J : value(J) >= 0}.
  double value(const Jet2& j) const { return (*f_)(j); }

  Region classify(const Jet2& j, double tol = kDefaultTol) const { return classify_value(value(j), tol); }
  bool contains(const Jet2& j, double tol = kDefaultTol) const { return classify(j, tol).member(); }

  explicit operator bool() const { return static_cast<bool>(f_); }

 private:
  Arity arity_ = Arity::PureSecondOrder;
  std::string label_;
  std::string text_;
  std::shared_ptr<const Functional> f_;
};

}  // namespace npt
