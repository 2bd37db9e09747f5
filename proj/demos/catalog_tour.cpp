// Walks a few catalog keys through membership, duality, canonical values and
// Garding eigenvalues for one matrix.

#include <iostream>

#include "npt/npt.hpp"

int main() {
  using namespace npt;
  const SymMat a = SymMat::diag({-1.0, 0.5, 2.0});
  const Jet2 j = Jet2::hessian(a);
  std::cout << "A = diag(-1, 0.5, 2)\n\n";
  for (const char* key : {"P", "P~", "branch:k=2", "pfold:p=2", "sigma:k=2", "pucci:1,2", "quasiconvex:lambda=1"}) {
    const FiberOracle f = fiber_from_key(key);
    const Region r = f.classify(j);
    const Region d = dual(f).classify(j);
    std::cout << f.label() << "\n  " << f.functional_text() << "\n  A in F: " << to_string(r.where) << "   A in F~: " << to_string(d.where)
              << "   canonical: " << format_number(canonical_operator(f, a)) << '\n';
  }
  std::cout << '\n';
  for (const char* key : {"det", "pfold:p=2", "delta-elliptic:0.5", "sigma:k=2"}) {
    const GardingOperator op = garding_from_key(key, 3);
    const Eigen::VectorXd lam = garding_eigenvalues(op, a);
    std::cout << op.label() << "  Lambda =";
    for (double l : lam) std::cout << ' ' << format_number(l);
    std::cout << '\n';
  }
}
