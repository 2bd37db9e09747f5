#pragma once

// Text formats: matrices and jets as JSON, solver configs, grid CSV and
// the JSON header written next to it.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "json.hpp"
#include "npt/expression.hpp"
#include "npt/keys.hpp"
#include "npt/solver.hpp"

namespace npt {

using Json = nlohmann::ordered_json;

inline Json parse_json(std::string_view text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::ParseError, what + ": " + e.what());
  }
}

namespace detail {

inline std::vector<double> json_numbers(const Json& j, const std::string& what) {
  if (!j.is_array()) fail(ErrorCode::ParseError, what + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (v.is_number()) out.push_back(v.get<double>());
    else if (v.is_string() && v.get<std::string>() == "inf") out.push_back(std::numeric_limits<double>::infinity());
    else fail(ErrorCode::ParseError, what + ": expected an array of numbers");
  }
  return out;
}

inline SymMat json_matrix(const Json& j) {
  if (!j.is_array() || j.empty()) fail(ErrorCode::ParseError, "matrix: expected a non-empty array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& row : j) rows.push_back(json_numbers(row, "matrix row"));
  return SymMat::from_rows(rows);
}

}  // namespace detail

/// "[[1,0],[0,2]]" or "diag(1,2)".
inline SymMat parse_matrix(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  if (s.rfind("diag(", 0) == 0 && s.size() > 6 && s.back() == ')') {
    const Json j = parse_json("[" + s.substr(5, s.size() - 6) + "]", "diag(...)");
    return SymMat::diag(detail::json_numbers(j, "diag(...)"));
  }
  return detail::json_matrix(parse_json(s, "matrix"));
}

/// {"r": 0, "p": [..], "A": [[..]]}; r and p default to zero. A bare matrix
/// is read as a pure Hessian jet.
inline Jet2 parse_jet(std::string_view text) {
  const Json j = parse_json(text, "jet");
  if (j.is_array()) return Jet2::hessian(detail::json_matrix(j));
  if (!j.is_object() || !j.contains("A")) fail(ErrorCode::ParseError, "jet: expected {\"r\", \"p\", \"A\"}");
  const SymMat a = j.at("A").is_string() ? parse_matrix(j.at("A").get<std::string>()) : detail::json_matrix(j.at("A"));
  Vec p = Vec::Zero(a.dim());
  if (j.contains("p")) {
    const auto v = detail::json_numbers(j.at("p"), "jet.p");
    if (static_cast<int>(v.size()) != a.dim()) fail(ErrorCode::DimensionMismatch, "jet.p has the wrong length");
    for (int i = 0; i < a.dim(); ++i) p(i) = v[i];
  }
  double r = 0.0;
  if (j.contains("r")) {
    if (!j.at("r").is_number()) fail(ErrorCode::ParseError, "jet.r must be a number");
    r = j.at("r").get<double>();
  }
  return {r, p, a};
}

inline Json to_json(const SymMat& a) {
  Json rows = Json::array();
  for (int i = 0; i < a.dim(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < a.dim(); ++k) row.push_back(a(i, k));
    rows.push_back(row);
  }
  return rows;
}

inline Json to_json(const Vec& v) {
  Json out = Json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

inline Json to_json(const Jet2& j) { return Json{{"r", j.r}, {"p", to_json(j.p)}, {"A", to_json(j.A)}}; }

inline Json to_json(const Region& r) {
  return Json{{"region", std::string(to_string(r.where))}, {"margin", r.margin}, {"value", r.value}};
}

inline Json to_json(const CheckReport& rep) {
  Json w = Json::array();
  for (const auto& j : rep.witnesses) w.push_back(to_json(j));
  return Json{{"name", rep.name},
              {"seed", rep.seed},
              {"checked", rep.checked},
              {"passed", rep.passed},
              {"excluded_boundary", rep.excluded_boundary},
              {"worst_margin", std::isfinite(rep.worst_margin) ? Json(rep.worst_margin) : Json(nullptr)},
              {"witnesses", w}};
}

// ---------------------------------------------------------------------------
// Solver configuration

struct SolverConfig {
  std::string op = "P";
  std::optional<double> level;    // constant right-hand side
  std::optional<std::string> psi;  // or an expression in x1..xn
  Box box = Box::cube(2, 0.0, 1.0);
  int nodes = 65;                  // per axis
  double dt = 0.0;
  double tol = 1e-10;
  long max_iter = 100000;
  std::string boundary = "0";
  std::optional<std::string> exact;  // reference solution for the error report

  int dim() const { return box.dim(); }
  Grid grid() const { return Grid(box, std::vector<int>(dim(), nodes)); }
  ScalarField rhs() const {
    if (psi) return Expression(*psi, dim()).field();
    const double c = level.value_or(0.0);
    return [c](const Vec&) { return c; };
  }
};

/// {operator, level | psi, box: {lo, hi} | [a, b], dim, h | nodes, dt, tol,
///  max_iter, boundary, exact}
inline SolverConfig parse_solver_config(const Json& j) {
  if (!j.is_object()) fail(ErrorCode::ParseError, "solver config must be a JSON object");
  static const std::vector<std::string> known{"operator", "level", "psi", "box", "dim", "h", "nodes", "dt", "tol", "max_iter", "boundary", "exact"};
  for (const auto& [k, v] : j.items())
    if (std::find(known.begin(), known.end(), k) == known.end()) fail(ErrorCode::ParseError, "solver config: unknown field '" + k + "'");
  auto number = [&](const char* k) {
    if (!j.at(k).is_number()) fail(ErrorCode::ParseError, std::string("solver config: ") + k + " must be a number");
    return j.at(k).get<double>();
  };
  auto text = [&](const char* k) {
    if (!j.at(k).is_string()) fail(ErrorCode::ParseError, std::string("solver config: ") + k + " must be a string");
    return j.at(k).get<std::string>();
  };
  SolverConfig c;
  if (j.contains("operator")) c.op = text("operator");
  if (j.contains("level")) c.level = number("level");
  if (j.contains("psi")) c.psi = text("psi");
  if (c.level && c.psi) fail(ErrorCode::ParseError, "solver config: give level or psi, not both");
  const int dim = j.contains("dim") ? static_cast<int>(number("dim")) : 2;
  if (dim < 1 || dim > 3) fail(ErrorCode::BadParameters, "solver config: dim must be 1, 2 or 3");
  c.box = Box::cube(dim, 0.0, 1.0);
  if (j.contains("box")) {
    const Json& b = j.at("box");
    if (b.is_array()) {
      const auto ab = detail::json_numbers(b, "box");
      if (ab.size() != 2) fail(ErrorCode::ParseError, "box: expected [lo, hi]");
      c.box = Box::cube(dim, ab[0], ab[1]);
    } else if (b.is_object() && b.contains("lo") && b.contains("hi")) {
      const auto lo = detail::json_numbers(b.at("lo"), "box.lo");
      const auto hi = detail::json_numbers(b.at("hi"), "box.hi");
      if (lo.size() != hi.size() || lo.empty()) fail(ErrorCode::ParseError, "box: lo and hi differ in length");
      c.box = {Eigen::Map<const Vec>(lo.data(), lo.size()), Eigen::Map<const Vec>(hi.data(), hi.size())};
    } else {
      fail(ErrorCode::ParseError, "box: expected [lo, hi] or {lo, hi}");
    }
  }
  const double width = c.box.hi(0) - c.box.lo(0);
  if (j.contains("h") && j.contains("nodes")) fail(ErrorCode::ParseError, "solver config: give h or nodes, not both");
  if (j.contains("h")) {
    const double h = number("h");
    if (!(h > 0.0)) fail(ErrorCode::BadParameters, "h must be positive");
    const double cells = width / h;
    if (std::abs(cells - std::round(cells)) > 1e-6 * cells) fail(ErrorCode::BadParameters, "h does not divide the box");
    c.nodes = static_cast<int>(std::round(cells)) + 1;
  }
  if (j.contains("nodes")) c.nodes = static_cast<int>(number("nodes"));
  if (j.contains("dt")) c.dt = number("dt");
  if (j.contains("tol")) c.tol = number("tol");
  if (j.contains("max_iter")) c.max_iter = static_cast<long>(number("max_iter"));
  if (j.contains("boundary")) c.boundary = text("boundary");
  if (j.contains("exact")) c.exact = text("exact");
  // Compile expressions now so that config errors surface before solving.
  Expression(c.boundary, c.dim());
  if (c.psi) Expression(*c.psi, c.dim());
  if (c.exact) Expression(*c.exact, c.dim());
  return c;
}

inline SolverConfig load_solver_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ParseError, "cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_solver_config(parse_json(ss.str(), path));
}

// ---------------------------------------------------------------------------
// Grid output

/// One row per node: coordinates x, y, z (as many as the grid has) then value.
inline void write_grid_csv(std::ostream& out, const GridFunction& u) {
  static const char* names[] = {"x", "y", "z"};
  const int n = u.grid.dim();
  for (int d = 0; d < n; ++d) out << names[d] << ',';
  out << "value\n";
  for (int k = 0; k < u.grid.size(); ++k) {
    const Vec x = u.grid.x(k);
    for (int d = 0; d < n; ++d) out << format_number(x(d)) << ',';
    out << format_number(u.values[k]) << '\n';
  }
}

inline Json grid_json(const Grid& g) {
  Json stencil = Json::array();
  for (const Offset& o : g.stencil()) {
    Json v = Json::array();
    for (int d = 0; d < g.dim(); ++d) v.push_back(o[d]);
    stencil.push_back(v);
  }
  return Json{{"lo", to_json(g.box().lo)}, {"hi", to_json(g.box().hi)}, {"dims", g.dims()}, {"h", g.h()}, {"layer", g.layer()}, {"stencil", stencil}};
}

inline Json solve_header(const SolverConfig& c, const SolveResult& r, std::uint64_t seed, int threads) {
  Json h{{"seed", seed},
         {"threads", threads},
         {"operator", c.op},
         {"rhs", c.psi ? Json(*c.psi) : Json(c.level.value_or(0.0))},
         {"boundary", c.boundary},
         {"grid", grid_json(r.u.grid)},
         {"dt", r.dt},
         {"tol", c.tol},
         {"iterations", r.iterations},
         {"residual", r.residual},
         {"residual_history", r.residuals}};
  return h;
}

}  // namespace npt
