#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace qmcis {

/// Gauss-Legendre rule mapped to [0,1]. Exact for polynomials of degree
/// 2*order-1.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendre(int order) {
    if (order < 1) throw std::invalid_argument("GaussLegendre: order must be >= 1");
    const int n = order;
    nodes.resize(n);
    weights.resize(n);
    // Newton iteration on P_n from the Chebyshev-like initial guess; the rule
    // is symmetric so only half the roots are computed.
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        if (n == 1) p0 = 1.0;
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      // Recompute the derivative at the converged root.
      {
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        if (n == 1) p0 = 1.0;
        dp = n * (x * p1 - p0) / (x * x - 1.0);
      }
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      nodes[i] = 0.5 * (1.0 - x);
      nodes[n - 1 - i] = 0.5 * (1.0 + x);
      weights[i] = weights[n - 1 - i] = 0.5 * w;
    }
    if (n % 2 == 1) nodes[n / 2] = 0.5;
  }

  int order() const noexcept { return static_cast<int>(nodes.size()); }

  /// Integral of f over [a,b].
  template <class F>
  double integrate(F&& f, double a, double b) const {
    const double h = b - a;
    double s = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) s += weights[k] * f(a + h * nodes[k]);
    return s * h;
  }
};

}  // namespace qmcis
