// Solves three Dirichlet problems whose exact solutions the wide stencil
// reproduces, then writes the last one as CSV.

#include <fstream>
#include <iostream>
#include <numbers>

#include "npt/npt.hpp"

int main(int argc, char** argv) {
  using namespace npt;
  const int nodes = argc > 1 ? std::atoi(argv[1]) : 33;
  const Grid g = Grid::cube(2, 0, 1, nodes);
  const ScalarField half_sq = [](const Vec& x) { return 0.5 * x.squaredNorm(); };
  const ScalarField saddle = [](const Vec& x) { return x(0) * x(0) - x(1) * x(1); };
  auto constant = [](double c) { return ScalarField([c](const Vec&) { return c; }); };

  struct Run {
    const char* key;
    double level;
    ScalarField exact;
  };
  SolveOptions opt;
  opt.tol = 1e-11;
  SolveResult last;
  for (const Run& r : {Run{"P", 1.0, half_sq}, Run{"pfold:p=2", 0.0, saddle}, Run{"slag", std::numbers::pi / 2, half_sq}}) {
    last = solve_dirichlet(scheme_from_key(r.key, 2), constant(r.level), r.exact, g, opt);
    const double err = last.u.max_abs_diff(GridFunction::sample(g, r.exact));
    std::cout << r.key << ": " << last.iterations << " sweeps, residual " << format_number(last.residual) << ", max error " << format_number(err) << '\n';
  }
  std::ofstream out("dirichlet_slag.csv");
  write_grid_csv(out, last.u);
  std::cout << "wrote dirichlet_slag.csv\n";
}
