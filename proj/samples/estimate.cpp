// Normalized error of the self-normalized estimator on Sobol points for the
// d = 2 Dirichlet example, n = 2^4 ... 2^16.
#include <cstdio>

#include "qmcis/qmcis.hpp"

int main() {
  using namespace qmcis;
  const auto model = DirichletModel::standard(2);
  const auto f = MonomialIntegrand::ones(2);
  const double ref = monomial_expectation(model, f);
  auto u = [&](std::span<const double> x) { return dirichlet_u(model, x); };
  std::printf("reference %.17g\n", ref);
  for (std::size_t n = 16; n <= 65536; n *= 2) {
    const auto r = importance_estimate(sobol(n, 2), f, u, ref);
    std::printf("n=%6zu  estimate=%.12f  error=%.3e\n", n, r.estimate, *r.normalized_error);
  }
}
