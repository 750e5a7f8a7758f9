#include <gtest/gtest.h>

#include "qmcis/bounds.hpp"
#include "qmcis/model_strings.hpp"

using namespace qmcis;

TEST(KoksmaHlawka, ConstantIntegrandHasZeroLhs) {
  const auto m = DirichletModel::standard(2);
  const auto p = halton(64, 2);
  const auto w = self_normalized_weights(p, density_of(m));
  const auto r = check_koksma_hlawka(p, w, m, ConstantIntegrand{2, 0.7});
  EXPECT_NEAR(r.koksma_hlawka->lhs, 0.0, 1e-15);
  EXPECT_TRUE(r.koksma_hlawka->pass);
}

TEST(KoksmaHlawka, DirichletHalton128) {
  const auto m = DirichletModel::standard(2);
  const auto p = halton(128, 2);
  const auto r = check_koksma_hlawka(p, self_normalized_weights(p, density_of(m)), m, MonomialIntegrand::ones(2));
  EXPECT_TRUE(r.koksma_hlawka->pass);
  EXPECT_TRUE(r.koksma_hlawka_full->pass);
  EXPECT_EQ(r.h1_norm, 1.0);
  EXPECT_EQ(r.h1_seminorm, 0.75);
}

TEST(KoksmaHlawka, ClassicalReduction) {
  const UniformDensity m{2};
  const auto p = sobol(100, 2);
  const auto r = check_koksma_hlawka(p, WeightVector::uniform(100), m, MonomialIntegrand::ones(2));
  EXPECT_NEAR(r.d_weighted, star_discrepancy_exact(p).value, 1e-12);
  EXPECT_DOUBLE_EQ(r.reference, 0.25 * 0.25);
  EXPECT_TRUE(r.koksma_hlawka->pass);
}

TEST(Relation, UniformModel) {
  const UniformDensity m{2};
  const auto p = halton(50, 2);
  const auto r = check_discrepancy_relation(p, m);
  EXPECT_NEAR(r.relation->lhs, r.d_classical, 1e-12);
  EXPECT_GE(r.relation->rhs, r.relation->lhs);
  EXPECT_TRUE(r.relation->pass);
}

TEST(Relation, DirichletSobol256) {
  const auto r = check_discrepancy_relation(sobol(256, 2), DirichletModel::standard(2));
  EXPECT_TRUE(r.relation->pass);
  EXPECT_GT(r.u_D_estimate, 0.0);
  EXPECT_NEAR(r.u_l1, 1.0 / 120.0, 1e-17);
}

TEST(Relation, OneDimExplicitPoints) {
  const DirichletModel m({2, 2});
  const PointSet p(1, {1.0 / 3.0, 2.0 / 3.0});
  const auto r = check_discrepancy_relation(p, m);
  EXPECT_TRUE(r.relation->pass);
  // equal weights by symmetry; pi([0,z)) = 3z^2 - 2z^3, sup at z = 2/3 closed: 1 - 20/27
  EXPECT_NEAR(r.d_weighted, 7.0 / 27.0, 1e-14);
}

TEST(MainBound, ConstantIntegrand) {
  const auto r = check_main_bound(halton(64, 2), DirichletModel::standard(2), ConstantIntegrand{2, 1.0});
  EXPECT_NEAR(r.main->lhs, 0.0, 1e-15);
  EXPECT_TRUE(r.main->pass);
}

TEST(MainBound, HaltonGridAllPass) {
  const auto m = DirichletModel::standard(2);
  BoundOptions opt;
  opt.ud = u_D_info(m);
  for (std::size_t n = 64; n <= 4096; n *= 2) {
    const auto r = check_main_bound(halton(n, 2), m, MonomialIntegrand::ones(2), opt);
    EXPECT_TRUE(r.all_pass()) << n;
    EXPECT_GT(r.main->rhs / r.main->lhs, 10.0) << n;
  }
}

TEST(MainBound, RhsReassembledFromComponents) {
  const auto m = DirichletModel::standard(2);
  const auto r = check_main_bound(sobol(128, 2), m, MonomialIntegrand::ones(2));
  EXPECT_EQ(r.main->rhs, 4.0 * r.h1_norm * r.u_D_estimate / r.u_l1 * r.d_classical);
  EXPECT_DOUBLE_EQ(r.main->rhs, r.h1_norm * r.relation->rhs);
  for (double c : {r.d_classical, r.d_weighted, r.h1_norm, r.h1_seminorm, r.u_D_estimate, r.u_l1, r.oracle_eps})
    EXPECT_GE(c, 0.0);
}

TEST(MainBound, SobolLhsShrinks) {
  const auto m = DirichletModel::standard(2);
  BoundOptions opt;
  opt.ud = u_D_info(m);
  const auto small = check_main_bound(sobol(64, 2), m, MonomialIntegrand::ones(2), opt);
  const auto large = check_main_bound(sobol(4096, 2), m, MonomialIntegrand::ones(2), opt);
  EXPECT_LT(large.main->lhs, small.main->lhs);
}

TEST(MainBound, Reproducible) {
  const auto m = DirichletModel::standard(2);
  const auto a = check_main_bound(halton(100, 2), m, MonomialIntegrand::ones(2));
  const auto b = check_main_bound(halton(100, 2), m, MonomialIntegrand::ones(2));
  EXPECT_EQ(a.main->rhs, b.main->rhs);
  EXPECT_EQ(a.d_weighted, b.d_weighted);
}

TEST(ModelStrings, RoundTrip) {
  const auto m = std::get<DirichletModel>(parse_model("dirichlet:d=2,alpha=2,2,2"));
  EXPECT_EQ(m, DirichletModel({2, 2, 2}));
  EXPECT_EQ(std::get<DirichletModel>(parse_model(to_string(m))), m);
  const auto f = std::get<MonomialIntegrand>(parse_integrand("monomial:gamma=1,1.5"));
  EXPECT_EQ(f.gamma()[1], 1.5);
  EXPECT_EQ(std::get<ConstantIntegrand>(parse_integrand("constant:d=3,c=0.5")).c, 0.5);
  EXPECT_EQ(std::get<UniformDensity>(parse_model("uniform:d=4")).d, 4u);
  EXPECT_TRUE(std::holds_alternative<std::monostate>(parse_measure("lebesgue")));
  EXPECT_EQ(std::get<DirichletModel>(parse_measure("dirichlet:2,2,3")).dim(), 2u);
}

TEST(ModelStrings, Errors) {
  EXPECT_THROW(parse_model("dirichlet:d=3,alpha=2,2,2"), std::invalid_argument);
  EXPECT_THROW(parse_model("gauss:d=2"), std::invalid_argument);
  EXPECT_THROW(parse_integrand("monomial:gamma=1,x"), std::invalid_argument);
  EXPECT_THROW(parse_measure("counting"), std::invalid_argument);
}
