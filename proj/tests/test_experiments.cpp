#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "qmcis/experiments.hpp"

using namespace qmcis;

namespace {

std::vector<ConvergenceRow> synthetic(double c, double power) {
  std::vector<ConvergenceRow> rows;
  for (std::size_t n = 16; n <= 65536; n *= 2) {
    ConvergenceRow r;
    r.n = n;
    r.normalized_error = c * std::pow(static_cast<double>(n), power);
    rows.push_back(r);
  }
  return rows;
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.dims = {2};
  c.n_grid = {64, 128, 256, 512, 1024};
  c.kinds = {"halton", "sobol", "uniform"};
  c.mc_reps = 4;
  c.fit_min = 64;
  c.fit_max = 1024;
  return c;
}

}  // namespace

TEST(FitRate, ExactPowerLaws) {
  EXPECT_NEAR(fit_rate(synthetic(3.0, -1.0)).slope, -1.0, 1e-9);
  EXPECT_NEAR(fit_rate(synthetic(0.2, -0.5)).slope, -0.5, 1e-9);
  EXPECT_NEAR(fit_rate(synthetic(4.0, -1.0)).intercept, 2.0, 1e-9);
}

TEST(FitRate, ZerosExcludedAndCounted) {
  auto rows = synthetic(1.0, -1.0);
  rows[2].normalized_error = 0.0;
  rows[5].normalized_error = 0.0;
  const auto f = fit_rate(rows);
  EXPECT_EQ(f.excluded, 2u);
  EXPECT_EQ(f.used, rows.size() - 2);
  EXPECT_NEAR(f.slope, -1.0, 1e-9);
}

TEST(FitRate, TooFewRows) {
  auto rows = synthetic(1.0, -1.0);
  rows.resize(3);
  EXPECT_THROW(fit_rate(rows), std::invalid_argument);
}

TEST(Config, RoundTrip) {
  ExperimentConfig c = small_config();
  c.mc_seed = 123456789012345ull;
  c.output = "out dir/x";
  std::istringstream is(serialize_config(c));
  EXPECT_EQ(parse_config(is), c);
  std::istringstream def(serialize_config(ExperimentConfig{}));
  EXPECT_EQ(parse_config(def), ExperimentConfig{});
}

TEST(Config, Validation) {
  auto parse = [](const std::string& s) {
    std::istringstream is(s);
    return parse_config(is);
  };
  EXPECT_THROW(parse("n_grid = 64,32\n"), std::invalid_argument);
  EXPECT_THROW(parse("dims = 17\n"), std::invalid_argument);
  EXPECT_THROW(parse("dims = 0\n"), std::invalid_argument);
  EXPECT_THROW(parse("kinds = faure\n"), std::invalid_argument);
  EXPECT_THROW(parse("colour = red\n"), std::invalid_argument);
  EXPECT_THROW(parse("mc_reps = 1\n"), std::invalid_argument);
  EXPECT_EQ(parse("# comment\n dims = 4 # trailing\n").dims, std::vector<std::size_t>{4});
}

TEST(Convergence, ReferenceColumn) {
  ExperimentConfig c = small_config();
  c.dims = {2, 4};
  for (const auto& r : run_convergence(c)) {
    const double expected = r.d == 2 ? 1.0 / 42.0 : 1.0 / 32760.0;
    EXPECT_NEAR(r.reference / expected, 1.0, 1e-12);
    EXPECT_EQ(r.status, "ok");
  }
}

TEST(Convergence, CanonicalOrderAndCap) {
  ExperimentConfig c = small_config();
  c.dims = {6, 2};
  c.kinds = {"sobol"};
  c.n_grid = {65536, 131072};
  const auto rows = run_convergence(c);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].d, 2u);
  EXPECT_EQ(rows[1].n, 131072u);
  EXPECT_EQ(rows[2].d, 6u);
  EXPECT_EQ(rows[2].n, 65536u);
}

TEST(Convergence, Deterministic) {
  const auto c = small_config();
  const auto a = run_convergence(c), b = run_convergence(c);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].estimate, b[i].estimate);
    EXPECT_EQ(a[i].normalized_error, b[i].normalized_error);
  }
}

TEST(Convergence, HaltonImproves) {
  ExperimentConfig c;
  EXPECT_LT(run_cell(c, "halton", 2, 65536).normalized_error, run_cell(c, "halton", 2, 64).normalized_error);
}

TEST(Convergence, UniformRowsCarryReps) {
  auto c = small_config();
  c.kinds = {"uniform"};
  for (const auto& r : run_convergence(c)) EXPECT_EQ(r.reps, 4u);
}

TEST(Convergence, CsvShape) {
  const auto c = small_config();
  const auto rows = run_convergence(c);
  std::ostringstream os;
  write_convergence_csv(os, rows);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "kind,d,n,reps,estimate,reference,normalized_error,wall_time,status");
  std::size_t count = 0;
  while (std::getline(is, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 8);
    ++count;
  }
  EXPECT_EQ(count, rows.size());
}

TEST(Checks, SobolBeatsMonteCarloAtD2) {
  auto c = small_config();
  c.kinds = {"sobol", "uniform"};
  c.mc_reps = 32;
  c.n_grid = {64, 128, 256, 512, 1024, 2048, 4096, 8192, 16384};
  c.fit_max = 16384;
  const auto rates = fit_rates(c, run_convergence(c));
  const auto checks = experiment_checks(rates);
  ASSERT_EQ(checks.size(), 1u);
  EXPECT_TRUE(checks[0].pass) << checks[0].detail;
}
