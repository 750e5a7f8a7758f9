#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "qmcis/discrepancy.hpp"
#include "qmcis/sequences.hpp"

using namespace qmcis;

namespace {

std::vector<double> column(const PointSet& p, std::size_t j) {
  std::vector<double> v;
  for (std::size_t i = 0; i < p.size(); ++i) v.push_back(p(i, j));
  return v;
}

bool all_in_unit(const PointSet& p) {
  for (double c : p.coords())
    if (!(c >= 0.0 && c < 1.0) || !std::isfinite(c)) return false;
  return true;
}

}  // namespace

TEST(Halton, FirstPointsOneDim) {
  EXPECT_EQ(column(halton(4, 1), 0), (std::vector<double>{0.5, 0.25, 0.75, 0.125}));
}

TEST(Halton, FirstPointTwoDims) {
  const auto p = halton(1, 2);
  EXPECT_EQ(p(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(p(0, 1), 1.0 / 3.0);
}

TEST(Halton, Deterministic) {
  EXPECT_EQ(halton(3, 1), halton(3, 1));
  EXPECT_EQ(halton(500, 7), halton(500, 7));
}

TEST(Halton, OneDimIsVanDerCorput) {
  const auto p = halton(1000, 1);
  for (std::size_t i = 0; i < p.size(); ++i) {
    // bit reversal of i+1 by hand
    std::uint64_t k = i + 1;
    double v = 0.0, f = 0.5;
    while (k) {
      if (k & 1u) v += f;
      f *= 0.5;
      k >>= 1;
    }
    EXPECT_EQ(p(i, 0), v) << i;
  }
}

TEST(Halton, ProjectionsAreStratified) {
  const std::uint64_t bases[] = {2, 3, 5, 7, 11};
  const std::size_t powers[] = {10, 6, 4, 3, 2};
  for (std::size_t j = 0; j < 5; ++j) {
    std::size_t cells = 1;
    for (std::size_t k = 0; k < powers[j]; ++k) cells *= bases[j];
    const auto p = halton(cells, 5);
    std::vector<int> hits(cells, 0);
    // the values are j / b^k rounded, so nudge before flooring
    for (std::size_t i = 0; i < cells; ++i)
      ++hits[static_cast<std::size_t>(p(i, j) * static_cast<double>(cells) * (1.0 + 1e-12))];
    for (int h : hits) ASSERT_EQ(h, 1) << "axis " << j;
  }
}

TEST(Halton, DiscrepancyWithinLogBound) {
  // one C fitted on n = 2^4 ... 2^12; every value must sit under C log(n+1)/n
  std::vector<std::pair<double, double>> obs;
  double c = 0.0;
  for (std::size_t n = 16; n <= 4096; n *= 2) {
    const double dn = star_discrepancy_exact(halton(n, 1)).value;
    const double scale = std::log(static_cast<double>(n + 1)) / static_cast<double>(n);
    obs.emplace_back(dn, scale);
    c = std::max(c, dn / scale);
  }
  EXPECT_LE(c, 1.0);
  for (auto [dn, scale] : obs) EXPECT_LE(dn, c * scale);
  EXPECT_LT(obs.back().first, obs.front().first);
}

TEST(Sobol, FirstPointsOneDim) {
  EXPECT_EQ(column(sobol(3, 1), 0), (std::vector<double>{0.5, 0.75, 0.25}));
}

TEST(Sobol, FirstPointIsCentre) {
  const auto p = sobol(1, 16);
  for (std::size_t j = 0; j < 16; ++j) EXPECT_EQ(p(0, j), 0.5);
}

TEST(Sobol, MatchesReferenceImplementation) {
  // rows 1 and 2 of the unscrambled new-joe-kuo-6.21201 sequence (row 0 = origin)
  const auto p = sobol(3, 16);
  const std::vector<double> row2{0.75, 0.25, 0.25, 0.25, 0.75, 0.75, 0.25, 0.75,
                                 0.75, 0.75, 0.75, 0.75, 0.25, 0.25, 0.75, 0.25};
  for (std::size_t j = 0; j < 16; ++j) EXPECT_EQ(p(1, j), row2[j]) << j;
}

TEST(Sobol, FirstCoordinateIsVanDerCorputAsSet) {
  const std::size_t n = 1024;
  const auto p = sobol(n - 1, 3);
  for (std::size_t j = 0; j < 3; ++j) {
    const auto col = column(p, j);
    const std::set<double> s(col.begin(), col.end());
    ASSERT_EQ(s.size(), n - 1);
    for (double v : s) EXPECT_EQ(std::fmod(v * static_cast<double>(n), 1.0), 0.0);
  }
}

TEST(Sobol, Deterministic) { EXPECT_EQ(sobol(777, 9), sobol(777, 9)); }

TEST(Uniform, SeededDeterminism) {
  EXPECT_EQ(uniform_random(5, 3, 7), uniform_random(5, 3, 7));
  EXPECT_NE(uniform_random(5, 3, 7), uniform_random(5, 3, 8));
}

TEST(Uniform, MeanNearHalf) {
  const auto p = uniform_random(100000, 1, 42);
  double s = 0.0;
  for (double c : p.coords()) s += c;
  EXPECT_NEAR(s / 1e5, 0.5, 0.01);
}

TEST(Sequences, RangeContract) {
  EXPECT_TRUE(all_in_unit(halton(4096, 16)));
  EXPECT_TRUE(all_in_unit(sobol(4096, 16)));
  EXPECT_TRUE(all_in_unit(uniform_random(4096, 16, 1)));
}

TEST(Sequences, RejectsBadArguments) {
  EXPECT_THROW(halton(0, 2), std::invalid_argument);
  EXPECT_THROW(halton(4, 0), std::invalid_argument);
  EXPECT_THROW(halton(4, 17), std::invalid_argument);
  EXPECT_THROW(sobol(4, 17), std::invalid_argument);
  EXPECT_THROW(uniform_random(0, 1, 1), std::invalid_argument);
}

TEST(PointSetType, ValidatesCoordinates) {
  EXPECT_THROW(PointSet(2, {0.1, 1.0}), std::invalid_argument);
  EXPECT_THROW(PointSet(2, {0.1, 0.2, 0.3}), std::invalid_argument);
  EXPECT_THROW(PointSet(2, {}), std::invalid_argument);
  const PointSet p(2, {0.1, 0.2, 0.3, 0.4});
  EXPECT_EQ(p.size(), 2u);
  EXPECT_EQ(p(1, 0), 0.3);
}

TEST(PointSetType, SourceRecorded) {
  EXPECT_EQ(halton(2, 2).source().kind, SourceKind::halton);
  EXPECT_EQ(sobol(2, 2).source().table, sobol_table::id);
  EXPECT_EQ(uniform_random(2, 2, 99).source().seed, 99u);
}
