#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "qmcis/dirichlet.hpp"
#include "qmcis/estimators.hpp"
#include "qmcis/integrands.hpp"

using namespace qmcis;

namespace {

const DirichletModel model2({2, 2, 2});
const auto u2 = [](std::span<const double> x) { return dirichlet_u(model2, x); };

}  // namespace

TEST(Estimate, ConstantIntegrand) {
  const ConstantIntegrand c{2, 0.37};
  EXPECT_DOUBLE_EQ(importance_estimate(halton(100, 2), c, u2).estimate, 0.37);
  EXPECT_DOUBLE_EQ(importance_estimate(uniform_random(33, 2, 5), c, u2).estimate, 0.37);
}

TEST(Estimate, HandArithmetic) {
  const PointSet p(1, {0.25, 0.5});
  const auto id = [](std::span<const double> x) { return x[0]; };
  const auto r = importance_estimate(p, id, id);
  EXPECT_NEAR(r.estimate, 5.0 / 12.0, 1e-15);
  EXPECT_EQ(r.n, 2u);
  EXPECT_NEAR(r.weights_used[0], 1.0 / 3.0, 1e-16);
}

TEST(Estimate, SobolLargeN) {
  const auto f = MonomialIntegrand::ones(2);
  const auto r = importance_estimate(sobol(std::size_t{1} << 16, 2), f, u2, 1.0 / 42.0);
  EXPECT_LT(*r.normalized_error, 0.01);
}

TEST(Estimate, EqualsWeightedSum) {
  const auto f = MonomialIntegrand::ones(2);
  const auto p = halton(300, 2);
  const auto w = self_normalized_weights(p, u2);
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += w[i] * f(p.point(i));
  EXPECT_NEAR(importance_estimate(p, f, u2).estimate, s, 1e-15);
}

TEST(Estimate, ZeroDensityPointsStayInN) {
  const PointSet p(2, {0.9, 0.9, 0.2, 0.3});
  const auto r = importance_estimate(p, MonomialIntegrand::ones(2), u2);
  EXPECT_EQ(r.n, 2u);
  EXPECT_EQ(r.zero_density_points, 1u);
  EXPECT_DOUBLE_EQ(r.estimate, 0.2 * 0.3 / 4.0);
}

TEST(Estimate, AllZeroDensityIsAnError) {
  const PointSet p(2, {0.9, 0.9, 0.6, 0.7});
  EXPECT_THROW(importance_estimate(p, MonomialIntegrand::ones(2), u2), ZeroDensityError);
}

TEST(Estimate, PermutationInvariant) {
  const auto f = MonomialIntegrand::ones(2);
  const auto p = sobol(256, 2);
  std::vector<std::size_t> order(256);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), std::mt19937_64(1));
  EXPECT_NEAR(importance_estimate(p, f, u2).estimate, importance_estimate(p.permuted(order), f, u2).estimate,
              1e-15);
}

TEST(Estimate, ScaleInvariant) {
  const auto f = MonomialIntegrand::ones(2);
  const auto p = halton(1000, 2);
  const double base = importance_estimate(p, f, u2).estimate;
  for (double c : {1e-6, 1.0, 1e6}) {
    const double s = importance_estimate(p, f, [&](std::span<const double> x) { return c * u2(x); }).estimate;
    EXPECT_NEAR(s / base, 1.0, 1e-12);
  }
}

TEST(Estimate, ConvexCombination) {
  const auto f = MonomialIntegrand::ones(2);
  const auto p = uniform_random(200, 2, 3);
  double lo = 1.0, hi = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (u2(p.point(i)) > 0.0) {
      lo = std::min(lo, f(p.point(i)));
      hi = std::max(hi, f(p.point(i)));
    }
  const double e = importance_estimate(p, f, u2).estimate;
  EXPECT_GE(e, lo);
  EXPECT_LE(e, hi);
}

TEST(Estimate, SobolImproves) {
  const auto f = MonomialIntegrand::ones(2);
  const double ref = 1.0 / 42.0;
  EXPECT_LT(*importance_estimate(sobol(std::size_t{1} << 14, 2), f, u2, ref).normalized_error,
            *importance_estimate(sobol(std::size_t{1} << 6, 2), f, u2, ref).normalized_error);
}

TEST(NormalizedError, Basics) {
  EXPECT_EQ(normalized_error(3.0, 3.0), 0.0);
  EXPECT_EQ(normalized_error(0.0, 3.0), 1.0);
  EXPECT_NEAR(normalized_error(1.05 * 2.0, 2.0), 0.05, 1e-15);
  EXPECT_THROW(normalized_error(1.0, 0.0), std::invalid_argument);
}

TEST(MonteCarlo, RootTwoPerDoubling) {
  const auto f = MonomialIntegrand::ones(2);
  const double ref = 1.0 / 42.0;
  const auto a = mc_repeated(100, 64, 4096, 2, f, u2, ref);
  const auto b = mc_repeated(100, 64, 8192, 2, f, u2, ref);
  const double ratio = a.rmse / b.rmse;
  EXPECT_GT(ratio, std::sqrt(2.0) * 0.7);
  EXPECT_LT(ratio, std::sqrt(2.0) * 1.3);
}

TEST(MonteCarlo, Deterministic) {
  const auto f = MonomialIntegrand::ones(2);
  const auto a = mc_repeated(9, 5, 100, 2, f, u2, 1.0 / 42.0);
  const auto b = mc_repeated(9, 5, 100, 2, f, u2, 1.0 / 42.0);
  EXPECT_EQ(a.rmse, b.rmse);
  EXPECT_EQ(a.seeds, b.seeds);
  for (std::size_t i = 0; i < a.runs.size(); ++i) EXPECT_EQ(a.runs[i].estimate, b.runs[i].estimate);
}

TEST(MonteCarlo, ConstantHasZeroError) {
  EXPECT_EQ(mc_repeated(1, 4, 50, 2, ConstantIntegrand{2, 2.0}, u2, 2.0).rmse, 0.0);
}

TEST(MonteCarlo, FailedRunsCounted) {
  // one point per run: it lands outside the simplex about half the time
  const auto s = mc_repeated(0, 40, 1, 2, ConstantIntegrand{2, 1.0}, u2, 1.0);
  EXPECT_GT(s.failed_runs, 0u);
  EXPECT_EQ(s.failed_runs + s.runs.size(), 40u);
  EXPECT_THROW(mc_repeated(0, 1, 10, 2, ConstantIntegrand{2, 1.0}, u2, 1.0), std::invalid_argument);
}
