// Checks the combined error bound on 128 Halton points in two dimensions.
#include <cstdio>

#include "qmcis/qmcis.hpp"

int main() {
  using namespace qmcis;
  const auto model = DirichletModel::standard(2);
  const auto f = MonomialIntegrand::ones(2);
  const auto r = check_main_bound(halton(128, 2), model, f);
  std::printf("D = %.6f  D_pi = %.6f  ||u||_D ~ %.4f  int u = %.6f\n", r.d_classical, r.d_weighted,
              r.u_D_estimate, r.u_l1);
  std::printf("KH:       %.3e <= %.3e  %s\n", r.koksma_hlawka->lhs, r.koksma_hlawka->rhs,
              r.koksma_hlawka->pass ? "ok" : "violated");
  std::printf("relation: %.3e <= %.3e  %s\n", r.relation->lhs, r.relation->rhs, r.relation->pass ? "ok" : "violated");
  std::printf("main:     %.3e <= %.3e  %s\n", r.main->lhs, r.main->rhs, r.main->pass ? "ok" : "violated");
  return r.all_pass() ? 0 : 1;
}
