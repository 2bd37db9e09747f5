#pragma once

// String keys for catalog fibers, Garding operators and solver schemes.
//
//   key    = family [ ":" params ] [ "~" ] ;
//   params = param { "," param } ;
//   param  = [ name "=" ] value ;
//
// A trailing "~" asks for the numeric dual, except for "P~" and "Q~", which
// have closed forms. Canonical spellings are the labels of the objects built
// from them, so key -> object -> label -> key round-trips.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "npt/duality.hpp"
#include "npt/garding.hpp"
#include "npt/solver.hpp"

namespace npt {

struct ParsedKey {
  std::string family;
  std::vector<std::pair<std::string, std::string>> params;  // name may be empty (positional)
  bool dual = false;
};

inline ParsedKey parse_key(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  if (s.empty()) fail(ErrorCode::UnknownKey, "empty key");
  ParsedKey k;
  if (s != "P~" && s != "Q~" && s.back() == '~') {
    k.dual = true;
    s.pop_back();
  }
  const auto colon = s.find(':');
  k.family = s.substr(0, colon);
  if (colon == std::string::npos) return k;
  const std::string rest = s.substr(colon + 1);
  if (rest.empty()) fail(ErrorCode::UnknownKey, "'" + std::string(text) + "': empty parameter list");
  std::size_t start = 0;
  while (start <= rest.size()) {
    const auto comma = rest.find(',', start);
    const std::string item = rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (item.empty()) fail(ErrorCode::UnknownKey, "'" + std::string(text) + "': empty parameter");
    const auto eq = item.find('=');
    if (eq == std::string::npos) k.params.push_back({"", item});
    else k.params.push_back({item.substr(0, eq), item.substr(eq + 1)});
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return k;
}

namespace detail {

/// Binds named or positional parameters to the expected names, in order.
inline std::map<std::string, std::string> bind_params(const ParsedKey& k, const std::vector<std::string>& names,
                                                      const std::map<std::string, std::string>& defaults = {}) {
  std::map<std::string, std::string> out = defaults;
  std::size_t pos = 0;
  for (const auto& [name, value] : k.params) {
    if (name.empty()) {
      if (pos >= names.size()) fail(ErrorCode::UnknownKey, k.family + ": too many parameters");
      out[names[pos++]] = value;
    } else {
      if (std::find(names.begin(), names.end(), name) == names.end()) fail(ErrorCode::UnknownKey, k.family + ": unknown parameter '" + name + "'");
      out[name] = value;
    }
  }
  for (const auto& n : names)
    if (!out.count(n)) fail(ErrorCode::UnknownKey, k.family + ": missing parameter '" + n + "'");
  return out;
}

inline double to_double(const std::string& family, const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorCode::UnknownKey, family + ": '" + s + "' is not a number");
}

inline int to_int(const std::string& family, const std::string& s) {
  const double v = to_double(family, s);
  if (!(v == std::floor(v)) || std::abs(v) > 1e6) fail(ErrorCode::UnknownKey, family + ": '" + s + "' is not an integer");
  return static_cast<int>(v);
}

inline void no_params(const ParsedKey& k) {
  if (!k.params.empty()) fail(ErrorCode::UnknownKey, k.family + " takes no parameters");
}

/// "full", "half:e1", "half:-e2", "orthant:1+2".
inline DirectionalCone parse_directional_cone(const std::string& s) {
  if (s == "full") return DirectionalCone::full();
  if (s.rfind("half:", 0) == 0) {
    std::string t = s.substr(5);
    int sign = 1;
    if (!t.empty() && t[0] == '-') {
      sign = -1;
      t = t.substr(1);
    }
    if (t.size() < 2 || t[0] != 'e') fail(ErrorCode::UnknownKey, "directional cone '" + s + "'");
    return DirectionalCone::halfspace(to_int("D", t.substr(1)) - 1, sign);
  }
  if (s.rfind("orthant:", 0) == 0) {
    std::vector<int> axes;
    std::string t = s.substr(8);
    std::size_t start = 0;
    for (;;) {
      const auto plus = t.find('+', start);
      axes.push_back(to_int("D", t.substr(start, plus == std::string::npos ? std::string::npos : plus - start)) - 1);
      if (plus == std::string::npos) break;
      start = plus + 1;
    }
    for (int a : axes)
      if (a < 0) fail(ErrorCode::UnknownKey, "directional cone '" + s + "': axes are 1-based");
    return DirectionalCone::orthant(axes);
  }
  fail(ErrorCode::UnknownKey, "directional cone '" + s + "'");
}

inline MonotonicityCone parse_monotonicity(const ParsedKey& k) {
  const auto p = bind_params(k, {"gamma", "D", "R"}, {{"gamma", "0"}, {"D", "full"}, {"R", "inf"}});
  const double R = to_double("M", p.at("R"));
  return MonotonicityCone(to_double("M", p.at("gamma")), parse_directional_cone(p.at("D")),
                          std::isinf(R) ? HessianRadius::infinite() : HessianRadius::finite(R));
}

}  // namespace detail

/// Constant-coefficient fiber oracle for a key.
inline FiberOracle fiber_from_key(std::string_view text) {
  const ParsedKey k = parse_key(text);
  auto build = [&]() -> FiberOracle {
    const std::string& f = k.family;
    if (f == "P" || f == "P~" || f == "Q" || f == "Q~" || f == "M0" || f == "lagrangian") {
      detail::no_params(k);
      if (f == "P") return cone_P();
      if (f == "P~") return cone_P_dual();
      if (f == "Q") return cone_Q();
      if (f == "Q~") return cone_Q_dual();
      if (f == "M0") return cone_M0();
      return cone_lagrangian();
    }
    if (f == "branch") return branch(detail::to_int(f, detail::bind_params(k, {"k"}).at("k")));
    if (f == "pfold") return cone_pfold(detail::to_int(f, detail::bind_params(k, {"p"}).at("p")));
    if (f == "sigma") return cone_sigma_k(detail::to_int(f, detail::bind_params(k, {"k"}).at("k")));
    if (f == "pucci") {
      const auto p = detail::bind_params(k, {"lam", "Lam"});
      return cone_pucci(detail::to_double(f, p.at("lam")), detail::to_double(f, p.at("Lam")));
    }
    if (f == "quasiconvex") return cone_quasiconvex(detail::to_double(f, detail::bind_params(k, {"lambda"}).at("lambda")));
    if (f == "M") return cone_M(detail::parse_monotonicity(k));
    if (f == "failure") {
      const auto p = detail::bind_params(k, {"alpha", "which"}, {{"which", "min"}});
      if (p.at("which") != "min" && p.at("which") != "max") fail(ErrorCode::UnknownKey, "failure: which must be min or max");
      return fiber_failure_example(detail::to_double(f, p.at("alpha")), p.at("which") == "min" ? Extremal::Min : Extremal::Max);
    }
    fail(ErrorCode::UnknownKey, "unknown fiber key '" + std::string(text) + "'");
  };
  const FiberOracle base = build();
  return k.dual ? dual(base) : base;
}

/// Garding operator on S(n) for a key.
inline GardingOperator garding_from_key(std::string_view text, int n) {
  const ParsedKey k = parse_key(text);
  if (k.dual) fail(ErrorCode::UnknownKey, "operators have no dual key");
  const std::string& f = k.family;
  if (f == "det") {
    detail::no_params(k);
    return op_det(n);
  }
  if (f == "lagrangian-ma") {
    detail::no_params(k);
    return op_lagrangian_ma(n);
  }
  if (f == "pfold") return op_pfold(n, detail::to_int(f, detail::bind_params(k, {"p"}).at("p")));
  if (f == "sigma") return op_sigma(n, detail::to_int(f, detail::bind_params(k, {"k"}).at("k")));
  if (f == "delta-elliptic") return op_delta_elliptic(n, detail::to_double(f, detail::bind_params(k, {"delta"}).at("delta")));
  if (f == "pucci-garding") {
    const auto p = detail::bind_params(k, {"lam", "Lam"});
    return op_pucci_garding(detail::to_double(f, p.at("lam")), detail::to_double(f, p.at("Lam")), n);
  }
  fail(ErrorCode::UnknownKey, "unknown operator key '" + std::string(text) + "'");
}

/// Wide-stencil scheme in dimension n for a key.
inline Scheme scheme_from_key(std::string_view text, int n) {
  const ParsedKey k = parse_key(text);
  const std::string& f = k.family;
  if (k.dual) fail(ErrorCode::UnknownKey, "schemes have no dual key");
  if (f == "P") {
    detail::no_params(k);
    return scheme_lambda_min();
  }
  if (f == "P~") {
    detail::no_params(k);
    return scheme_lambda_max();
  }
  if (f == "slag") {
    detail::no_params(k);
    return scheme_arctan_sum();
  }
  if (f == "branch") return scheme_branch(detail::to_int(f, detail::bind_params(k, {"k"}).at("k")), n);
  if (f == "pfold") return scheme_pfold(detail::to_int(f, detail::bind_params(k, {"p"}).at("p")), n);
  if (f == "pucci") {
    const auto p = detail::bind_params(k, {"lam", "Lam"});
    return scheme_pucci(detail::to_double(f, p.at("lam")), detail::to_double(f, p.at("Lam")));
  }
  fail(ErrorCode::UnknownKey, "no scheme for key '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// Registry

enum class EntryKind { Fiber, Operator, VariableFiber, Scheme };

inline std::string_view to_string(EntryKind k) {
  switch (k) {
    case EntryKind::Fiber: return "fiber";
    case EntryKind::Operator: return "operator";
    case EntryKind::VariableFiber: return "variable-fiber";
    case EntryKind::Scheme: return "scheme";
  }
  return "?";
}

struct CatalogEntry {
  std::string pattern;  // key with placeholders
  std::string example;  // a concrete key
  std::vector<EntryKind> kinds;
  std::string arity;
  std::string parameters;
  std::string anchor;  // the mathematical object the key names
};

inline const std::vector<CatalogEntry>& catalog_entries() {
  using K = EntryKind;
  static const std::vector<CatalogEntry> entries{
      {"P", "P", {K::Fiber, K::Scheme}, "pure second order", "", "convexity: A >= 0; scheme lambda_min(D^2 u)"},
      {"P~", "P~", {K::Fiber, K::Scheme}, "pure second order", "", "subaffine functions: lambda_max(A) >= 0"},
      {"Q", "Q", {K::Fiber}, "gradient-free", "", "convexity-negativity N x P"},
      {"Q~", "Q~", {K::Fiber}, "gradient-free", "", "dual of N x P: r <= 0 or lambda_max(A) >= 0"},
      {"M0", "M0", {K::Fiber}, "full", "", "minimal monotonicity cone N x {0} x P"},
      {"branch:k=K", "branch:k=2", {K::Fiber, K::Scheme}, "pure second order", "K: 1-based eigenvalue index", "k-th branch of Monge-Ampere: lambda_k(A) >= 0"},
      {"pfold:p=P", "pfold:p=2", {K::Fiber, K::Operator, K::Scheme}, "pure second order", "P: number of summed eigenvalues",
       "p-convexity: lambda_1 + ... + lambda_p >= 0; Garding operator prod over p-subsets"},
      {"sigma:k=K", "sigma:k=2", {K::Fiber, K::Operator}, "pure second order", "K: order of the elementary symmetric function", "k-Hessian cone Sigma_k"},
      {"pucci:LAM,LAM2", "pucci:1,2", {K::Fiber, K::Scheme}, "pure second order", "0 < lam < Lam", "Pucci cone lam tr A^+ + Lam tr A^- >= 0"},
      {"quasiconvex:lambda=L", "quasiconvex:lambda=1", {K::Fiber}, "pure second order", "L >= 0", "lambda-quasiconvexity A + lambda I >= 0"},
      {"lagrangian", "lagrangian", {K::Fiber}, "pure second order", "even dimension", "Lagrangian harmonic cone on S(2n)"},
      {"M:gamma=G,D=CONE,R=RAD", "M:gamma=1,D=half:e1,R=inf", {K::Fiber}, "full",
       "G >= 0; CONE in full, half:[-]eJ, orthant:J+J; RAD > 0 or inf", "fundamental monotonicity family r <= -gamma|p|, p in D, A >= (|p|/R) I"},
      {"failure:alpha=A,which=W", "failure:alpha=2,which=min", {K::Fiber}, "gradient-Hessian", "A > 1, W in min|max",
       "comparison counterexample lambda_min(A + |p|^((alpha-1)/n)(P_perp + alpha P_p))"},
      {"KEY~", "pucci:1,2~", {K::Fiber}, "as KEY", "any fiber key", "Dirichlet dual (-Int F)^c, computed numerically"},
      {"det", "det", {K::Operator}, "pure second order", "", "Monge-Ampere det A = prod lambda_j"},
      {"delta-elliptic:DELTA", "delta-elliptic:0.5", {K::Operator}, "pure second order", "DELTA > 0", "prod_j (lambda_j + delta tr A)"},
      {"lagrangian-ma", "lagrangian-ma", {K::Operator}, "pure second order", "even dimension", "Lagrangian Monge-Ampere prod (tr A / 2 +- mu_1 +- ... +- mu_n)"},
      {"pucci-garding:LAM,LAM2", "pucci-garding:1,2", {K::Operator}, "pure second order", "0 < lam < Lam",
       "product of sum_i v_i lambda_i over extreme vertices v of {lam, Lam}^n"},
      {"slag", "slag", {K::VariableFiber, K::Scheme}, "pure second order", "phase theta(x)", "special Lagrangian sum_k arctan lambda_k(A) >= theta(x)"},
      {"perturbed-ma", "perturbed-ma", {K::VariableFiber}, "pure second order", "M(x), f(x) >= 0", "A + M(x) >= 0, det(A + M(x)) >= f(x)"},
      {"affine-sphere", "affine-sphere", {K::VariableFiber}, "gradient-free", "f(x) >= 0", "r <= 0, A >= 0, (-r)^(n+2) det A >= f(x)"},
      {"optimal-transport", "optimal-transport", {K::VariableFiber}, "gradient-Hessian", "g directional on D, f(x) >= 0", "p in D, A >= 0, g(p) det A >= f(x)"},
  };
  return entries;
}

struct KeyDescription {
  std::string key;  // canonical spelling
  std::string family;
  std::vector<EntryKind> kinds;
  std::string arity;
  std::string inequality;
  std::map<std::string, std::string> parameters;
  std::string anchor;
};

inline std::string arity_name(Arity a) {
  switch (a) {
    case Arity::PureSecondOrder: return "pure second order";
    case Arity::GradientFree: return "gradient-free";
    case Arity::GradientHessian: return "gradient-Hessian";
    case Arity::Full: return "full";
  }
  return "?";
}

/// Resolves a key against the registry; fiber keys are built to report the
/// defining inequality and the canonical spelling.
inline KeyDescription describe_key(std::string_view text) {
  const ParsedKey k = parse_key(text);
  const CatalogEntry* entry = nullptr;
  for (const auto& e : catalog_entries()) {
    const ParsedKey pe = parse_key(e.example);
    if (!k.dual && pe.family == k.family && !pe.dual) entry = &e;
    if (k.dual && e.pattern == "KEY~") entry = &e;
  }
  if (!entry) fail(ErrorCode::UnknownKey, "unknown key '" + std::string(text) + "'");
  KeyDescription d;
  d.family = k.family;
  d.kinds = entry->kinds;
  d.anchor = entry->anchor;
  static const std::map<std::string, std::pair<std::vector<std::string>, std::map<std::string, std::string>>> names{
      {"branch", {{"k"}, {}}},
      {"pfold", {{"p"}, {}}},
      {"sigma", {{"k"}, {}}},
      {"pucci", {{"lam", "Lam"}, {}}},
      {"quasiconvex", {{"lambda"}, {}}},
      {"M", {{"gamma", "D", "R"}, {{"gamma", "0"}, {"D", "full"}, {"R", "inf"}}}},
      {"failure", {{"alpha", "which"}, {{"which", "min"}}}},
      {"delta-elliptic", {{"delta"}, {}}},
      {"pucci-garding", {{"lam", "Lam"}, {}}},
  };
  if (const auto it = names.find(k.family); it != names.end()) d.parameters = detail::bind_params(k, it->second.first, it->second.second);
  const bool fiber = std::find(d.kinds.begin(), d.kinds.end(), EntryKind::Fiber) != d.kinds.end();
  if (fiber) {
    const FiberOracle f = fiber_from_key(text);
    d.key = f.label();
    d.arity = arity_name(f.arity());
    d.inequality = f.functional_text();
  } else if (std::find(d.kinds.begin(), d.kinds.end(), EntryKind::Operator) != d.kinds.end()) {
    const int n = k.family == "lagrangian-ma" ? 2 : 3;
    const GardingOperator op = garding_from_key(text, n);
    d.key = op.label();
    d.arity = entry->arity;
    d.inequality = "Garding cone of " + op.formula();
  } else {
    if (!k.params.empty()) fail(ErrorCode::UnknownKey, k.family + " takes its data from fields, not key parameters");
    d.key = k.family;
    d.arity = entry->arity;
    d.inequality = entry->anchor;
  }
  return d;
}

}  // namespace npt
