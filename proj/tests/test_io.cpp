#include <gtest/gtest.h>

#include <sstream>

#include "qmcis/io.hpp"
#include "qmcis/sequences.hpp"

using namespace qmcis;

TEST(PointsCsv, LosslessRoundTrip) {
  for (const auto& p : {halton(50, 3), sobol(64, 5), uniform_random(40, 2, 11)}) {
    std::stringstream ss;
    write_points_csv(ss, p);
    const auto q = read_points_csv(ss);
    ASSERT_EQ(q.dim(), p.dim());
    ASSERT_EQ(q.size(), p.size());
    for (std::size_t i = 0; i < p.coords().size(); ++i) EXPECT_EQ(q.coords()[i], p.coords()[i]);
  }
}

TEST(PointsCsv, NoHeaderSeventeenDigits) {
  std::stringstream ss;
  write_points_csv(ss, halton(1, 2));
  EXPECT_EQ(ss.str(), "0.5,0.33333333333333331\n");
}

TEST(PointsCsv, RaggedRowsRejected) {
  std::stringstream ss("0.1,0.2\n0.3\n");
  EXPECT_THROW(read_points_csv(ss), std::invalid_argument);
  std::stringstream empty("");
  EXPECT_THROW(read_points_csv(empty), std::invalid_argument);
  std::stringstream out_of_range("0.1,1.5\n");
  EXPECT_THROW(read_points_csv(out_of_range), std::invalid_argument);
}
