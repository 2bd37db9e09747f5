// npt: command-line front end over the subequation library.
//
// Exit status: 0 ok, 1 negative verdict, 2 usage or parse error, 3 domain
// error, 4 no convergence, 5 hypothesis violation.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "suites.hpp"

using namespace npt;
using npt::cli::SuiteLine;

namespace {

enum Exit { kOk = 0, kNegative = 1, kUsage = 2, kDomain = 3, kNoConvergence = 4, kHypothesis = 5 };

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::UnknownKey:
    case ErrorCode::ParseError: return kUsage;
    case ErrorCode::NotConverged:
    case ErrorCode::UnstableStep: return kNoConvergence;
    case ErrorCode::HypothesisViolation: return kHypothesis;
    default: return kDomain;
  }
}

struct Globals {
  std::uint64_t seed = kDefaultSeed;
  int threads = 1;
  double tol = kDefaultTol;
  bool anchors = false;
};

Json header(const std::string& command, const Globals& g) { return Json{{"command", command}, {"seed", g.seed}, {"threads", g.threads}}; }

void print(const Json& j) { std::cout << j.dump(2) << '\n'; }

const std::vector<std::pair<std::string, std::vector<std::string>>>& anchors() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> a{
      {"catalog", {"subequation: closed F in J^2 = R x R^n x S(n) with F + N in F, F + P in F, F = closure of Int F",
                   "fiber F_x: the jets admissible at x"}},
      {"membership", {"F-subharmonic: every upper test jet at x lies in F_x"}},
      {"dual", {"Dirichlet dual: F~ = (-Int F)^c, F~~ = F", "superharmonics of F are negatives of F~-subharmonics"}},
      {"canonical", {"canonical operator: degenerate elliptic f with f(A + tI) = f(A) + t and {f >= 0} = F"}},
      {"garding", {"Garding eigenvalues: Lambda_j(A) = -roots of s -> F(sI + A), F(A) = F(I) prod_j Lambda_j(A)",
                   "branch k: {Lambda_k >= 0}"}},
      {"distance", {"signed distance from a jet to the boundary of F in the jet norm"}},
      {"pseudoconvex", {"strict F-pseudoconvexity: A_x + t P_e in Int F for all large t, A_x the second fundamental form for the inward normal e",
                        "strict ellipticity: P_e in Int F for every unit e"}},
      {"solve", {"Dirichlet problem: F-harmonic h on the domain with h = phi on the boundary",
                 "wide-stencil monotone scheme u <- u + dt (F_h(u) - psi)"}},
      {"check", {"duality-involution: F~~ = F", "garding-identities: product identity and Lambda_j(A + tI) = Lambda_j(A) + t",
                 "monotonicity: F + M in F", "comparison: u <= w on the boundary implies u <= w inside",
                 "utp: tau_y u + theta psi stays subharmonic for small |y|"}},
  };
  return a;
}

void print_anchors(const std::string& command) {
  for (const auto& [cmd, lines] : anchors()) {
    if (!command.empty() && cmd != command) continue;
    for (const auto& l : lines) std::cout << cmd << ": " << l << '\n';
  }
}

Jet2 read_jet(const std::string& matrix, const std::string& jet) {
  if (!matrix.empty() && !jet.empty()) fail(ErrorCode::ParseError, "give --matrix or --jet, not both");
  if (!matrix.empty()) return Jet2::hessian(parse_matrix(matrix));
  if (!jet.empty()) return parse_jet(jet);
  fail(ErrorCode::ParseError, "one of --matrix or --jet is required");
}

Json kinds_json(const std::vector<EntryKind>& kinds) {
  Json k = Json::array();
  for (auto e : kinds) k.push_back(std::string(to_string(e)));
  return k;
}

int cmd_catalog(const std::string& action, const std::string& key, bool json, const Globals& g) {
  if (action == "list") {
    if (json) {
      Json out = header("catalog list", g);
      Json entries = Json::array();
      for (const auto& e : catalog_entries())
        entries.push_back({{"key", e.pattern}, {"example", e.example}, {"kinds", kinds_json(e.kinds)}, {"arity", e.arity},
                           {"parameters", e.parameters}, {"anchor", e.anchor}});
      out["entries"] = entries;
      print(out);
    } else {
      for (const auto& e : catalog_entries()) {
        std::string kinds;
        for (auto k : e.kinds) kinds += (kinds.empty() ? "" : ",") + std::string(to_string(k));
        std::cout << e.pattern << "\t[" << kinds << "]\t" << e.arity << "\t" << e.anchor << '\n';
      }
    }
    return kOk;
  }
  if (key.empty()) fail(ErrorCode::ParseError, "catalog describe needs a key");
  const KeyDescription d = describe_key(key);
  Json out = header("catalog describe", g);
  out["key"] = d.key;
  out["family"] = d.family;
  out["kinds"] = kinds_json(d.kinds);
  out["arity"] = d.arity;
  out["parameters"] = d.parameters;
  out["inequality"] = d.inequality;
  out["anchor"] = d.anchor;
  print(out);
  return kOk;
}

int cmd_membership(const std::string& key, const Jet2& j, bool via_dual, const Globals& g) {
  const FiberOracle base = fiber_from_key(key);
  const FiberOracle f = via_dual ? dual(base) : base;
  Json out = header(via_dual ? "dual" : "membership", g);
  out["key"] = f.label();
  out["inequality"] = f.functional_text();
  const Region r = f.classify(j, g.tol);
  out.update(to_json(r));
  print(out);
  return r.member() ? kOk : kNegative;
}

int cmd_canonical(const std::string& key, const SymMat& a, const Globals& g) {
  const FiberOracle f = fiber_from_key(key);
  Json out = header("canonical", g);
  out["key"] = f.label();
  out["matrix"] = to_json(a);
  out["value"] = canonical_operator(f, a);
  print(out);
  return kOk;
}

int cmd_garding(const std::string& key, const SymMat& a, const Globals& g) {
  const GardingOperator op = garding_from_key(key, a.dim());
  const Eigen::VectorXd lam = garding_eigenvalues(op, a);
  double prod = op.eval_identity();
  for (double l : lam) prod *= l;
  Json out = header("garding", g);
  out["op"] = op.label();
  out["formula"] = op.formula();
  out["degree"] = op.degree();
  out["eigenvalues"] = to_json(Vec(lam));
  out["eval"] = op(a);
  out["eval_identity"] = op.eval_identity();
  out["product"] = prod;
  const Region r = garding_cone_contains(op, a, g.tol);
  out["cone"] = to_json(r);
  print(out);
  return kOk;
}

int cmd_distance(const std::string& key, const Jet2& j, int directions, const Globals& g) {
  const FiberOracle f = fiber_from_key(key);
  Json out = header("distance", g);
  out["key"] = f.label();
  out["directions"] = directions;
  out["signed_distance"] = signed_distance(f, j, directions, g.seed, g.tol);
  print(out);
  return kOk;
}

LevelSetDomain read_domain(const std::string& spec) {
  Json j;
  if (!spec.empty() && (spec.front() == '{')) j = parse_json(spec, "domain");
  else j = Json{{"shape", spec}};
  if (!j.contains("shape") || !j.at("shape").is_string()) fail(ErrorCode::ParseError, "domain: missing \"shape\"");
  const std::string shape = j.at("shape").get<std::string>();
  const int n = j.contains("dim") ? j.at("dim").get<int>() : 3;
  if (shape == "sphere") return sphere_domain(n, j.value("radius", 1.0));
  if (shape == "slab") return slab_face_domain(n, j.value("axis", 0), j.value("width", 1.0));
  if (shape == "cylinder") return cylinder_domain();
  if (shape == "saddle") return saddle_domain();
  if (shape == "ellipsoid") {
    if (!j.contains("axes")) fail(ErrorCode::ParseError, "ellipsoid needs \"axes\"");
    const auto axes = j.at("axes").get<std::vector<double>>();
    return ellipsoid_domain(Eigen::Map<const Vec>(axes.data(), axes.size()));
  }
  fail(ErrorCode::ParseError, "unknown domain shape '" + shape + "' (sphere, slab, cylinder, saddle, ellipsoid)");
}

int cmd_pseudoconvex(const std::string& domain, const std::string& key, int points, const std::string& out_path, const Globals& g) {
  const LevelSetDomain dom = read_domain(domain);
  const FiberOracle f = fiber_from_key(key);
  const int n = dom.dim();
  const bool elliptic = strict_ellipticity_check(f, n, 512, g.seed, g.tol).strict;
  const auto pts = sample_boundary_points(dom, points, g.seed);
  if (pts.empty()) fail(ErrorCode::NotOnBoundary, "no boundary points found for " + dom.label);
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) fail(ErrorCode::ParseError, "cannot write '" + out_path + "'");
  }
  std::ostream& out = out_path.empty() ? std::cout : file;
  out << "# domain=" << dom.label << " key=" << f.label() << " seed=" << g.seed << " strictly_elliptic=" << (elliptic ? "yes" : "no") << '\n';
  out << "point";
  for (int d = 0; d < n; ++d) out << ",x" << d + 1;
  for (int d = 0; d < n; ++d) out << ",e" << d + 1;
  for (int d = 0; d + 1 < n; ++d) out << ",k" << d + 1;
  out << ",verdict,t0,method\n";
  bool all = true;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto v = strict_pseudoconvex_at(f, pts[i], 1e6, g.tol);
    all = all && v.strict;
    out << i;
    for (int d = 0; d < n; ++d) out << ',' << format_number(pts[i].x(d));
    for (int d = 0; d < n; ++d) out << ',' << format_number(pts[i].e(d));
    for (int d = 0; d < pts[i].curvatures.size(); ++d) out << ',' << format_number(pts[i].curvatures(d));
    out << ',' << (v.strict ? "yes" : "no") << ',' << (v.strict ? format_number(v.t0) : "") << ',' << (elliptic ? "strict-ellipticity" : "boundary-form")
        << '\n';
  }
  if (!out_path.empty()) std::cout << pts.size() << " points, " << (all ? "all strictly pseudoconvex" : "some points fail") << '\n';
  return all ? kOk : kNegative;
}

int cmd_solve(const std::string& config_path, const std::string& out_dir, const Globals& g) {
  const SolverConfig c = load_solver_config(config_path);
  const Grid grid = c.grid();
  SolveOptions opt;
  opt.dt = c.dt;
  opt.tol = c.tol;
  opt.max_iter = c.max_iter;
  opt.threads = g.threads;
  const SolveResult r = solve_dirichlet(scheme_from_key(c.op, c.dim()), c.rhs(), Expression(c.boundary, c.dim()).field(), grid, opt);
  Json head = solve_header(c, r, g.seed, g.threads);
  if (c.exact) {
    const Expression exact(*c.exact, c.dim());
    double err = 0.0;
    for (int k = 0; k < grid.size(); ++k) err = std::max(err, std::abs(r.u.values[k] - exact(grid.x(k))));
    head["exact"] = *c.exact;
    head["max_error"] = err;
  }
  std::filesystem::create_directories(out_dir);
  const auto csv = std::filesystem::path(out_dir) / "solution.csv";
  const auto json = std::filesystem::path(out_dir) / "solution.json";
  std::ofstream(csv) << [&] {
    std::ostringstream s;
    write_grid_csv(s, r.u);
    return s.str();
  }();
  std::ofstream(json) << head.dump(2) << '\n';
  Json summary = header("solve", g);
  summary["operator"] = c.op;
  summary["nodes"] = grid.size();
  summary["iterations"] = r.iterations;
  summary["dt"] = r.dt;
  summary["residual"] = r.residual;
  if (head.contains("max_error")) summary["max_error"] = head["max_error"];
  summary["csv"] = csv.string();
  summary["header"] = json.string();
  print(summary);
  return kOk;
}

int cmd_check(const std::string& suite, int samples, const Globals& g) {
  const auto& all = npt::cli::suites();
  const auto it = all.find(suite);
  if (it == all.end()) {
    std::string names;
    for (const auto& [k, v] : all) names += (names.empty() ? "" : ", ") + k;
    fail(ErrorCode::UnknownKey, "unknown suite '" + suite + "' (" + names + ")");
  }
  const std::vector<SuiteLine> lines = it->second({g.seed, g.threads, g.tol, samples});
  int passed = 0;
  for (const auto& l : lines) {
    passed += l.pass;
    std::cout << (l.pass ? "PASS  " : "FAIL  ") << l.name << "  " << l.detail << '\n';
  }
  std::cout << suite << ": " << passed << "/" << lines.size() << " passed (seed " << g.seed << ")\n";
  return passed == static_cast<int>(lines.size()) ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subequation toolkit: catalog, duality, Garding, canonical operators, pseudoconvexity, Dirichlet solver"};
  app.require_subcommand(0, 1);
  Globals g;
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads for grid sweeps")->check(CLI::Range(1, 256))->capture_default_str();
  app.add_option("--tol", g.tol, "boundary band for classifications")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_flag("--paper-anchors", g.anchors, "print the concept each command computes and exit");

  std::string key, op, matrix, jet, config, out_dir = "npt-out", domain = "sphere", out_path, action, suite;
  bool json = false;
  int points = 16, directions = 256, samples = 0;

  auto* catalog = app.add_subcommand("catalog", "list keys or describe one");
  catalog->add_option("action", action, "list | describe")->required()->check(CLI::IsMember({"list", "describe"}));
  catalog->add_option("key", key, "key to describe");
  catalog->add_flag("--json", json, "list as JSON");

  auto add_jet = [&](CLI::App* c) {
    c->add_option("--key", key, "fiber key")->required();
    c->add_option("--matrix", matrix, "Hessian as [[..],..] or diag(..)");
    c->add_option("--jet", jet, "jet as {\"r\":..,\"p\":[..],\"A\":[[..]]}");
  };
  auto* membership = app.add_subcommand("membership", "classify a jet against a fiber");
  add_jet(membership);
  auto* dualc = app.add_subcommand("dual", "classify a jet against the Dirichlet dual");
  add_jet(dualc);
  auto* distance = app.add_subcommand("distance", "signed distance from a jet to the fiber boundary");
  add_jet(distance);
  distance->add_option("--directions", directions, "sampled rays")->capture_default_str();

  auto* canonical = app.add_subcommand("canonical", "canonical operator value");
  canonical->add_option("--key", key, "fiber key")->required();
  canonical->add_option("--matrix", matrix, "symmetric matrix")->required();

  auto* garding = app.add_subcommand("garding", "Garding eigenvalues of a matrix");
  garding->add_option("--op", op, "operator key")->required();
  garding->add_option("--matrix", matrix, "symmetric matrix")->required();

  auto* pseudo = app.add_subcommand("pseudoconvex", "strict pseudoconvexity report at sampled boundary points (CSV)");
  pseudo->add_option("--domain", domain, "sphere | slab | cylinder | saddle | ellipsoid, or a JSON spec")->capture_default_str();
  pseudo->add_option("--key", key, "fiber key")->required();
  pseudo->add_option("--points", points, "boundary points")->capture_default_str();
  pseudo->add_option("--out", out_path, "CSV file (default stdout)");

  auto* solve = app.add_subcommand("solve", "Dirichlet solve from a JSON config");
  solve->add_option("--config", config, "config file")->required()->check(CLI::ExistingFile);
  solve->add_option("--out-dir", out_dir, "artifact directory")->capture_default_str();

  auto* check = app.add_subcommand("check", "run a property suite");
  check->add_option("suite", suite, "duality-involution | garding-identities | monotonicity | comparison | utp")->required();
  check->add_option("--samples", samples, "override the suite's sample count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (g.anchors) {
      std::string which;
      for (auto* s : app.get_subcommands()) which = s->get_name();
      print_anchors(which);
      return kOk;
    }
    if (*catalog) return cmd_catalog(action, key, json, g);
    if (*membership) return cmd_membership(key, read_jet(matrix, jet), false, g);
    if (*dualc) return cmd_membership(key, read_jet(matrix, jet), true, g);
    if (*distance) return cmd_distance(key, read_jet(matrix, jet), directions, g);
    if (*canonical) return cmd_canonical(key, parse_matrix(matrix), g);
    if (*garding) return cmd_garding(op, parse_matrix(matrix), g);
    if (*pseudo) return cmd_pseudoconvex(domain, key, points, out_path, g);
    if (*solve) return cmd_solve(config, out_dir, g);
    if (*check) return cmd_check(suite, samples, g);
    std::cout << app.help();
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "npt: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const Json::exception& e) {
    std::cerr << "npt: ParseError: " << e.what() << '\n';
    return kUsage;
  }
}
