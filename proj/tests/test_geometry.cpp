#include <gtest/gtest.h>

#include <random>

#include "annmax/geometry.hpp"
#include "support.hpp"

using namespace annmax;

TEST(Dist, ThreeFourFive) {
  const Point o{0, 0, 0}, p{3, 4, 1};
  EXPECT_EQ(dist(o, p, Metric::L1), 7.0);
  EXPECT_EQ(dist(o, p, Metric::L2), 5.0);
  EXPECT_EQ(dist(Point{2, 2, 0}, Point{2, 2, 1}, Metric::L1), 0.0);
}

TEST(Rotate, Examples) {
  EXPECT_EQ(rotate45({1, 0, 0}), (RotatedPoint{1, 1}));
  EXPECT_EQ(rotate45({0, 0, 0}), (RotatedPoint{0, 0}));
  EXPECT_EQ(rotate45({2, 3, 0}), (RotatedPoint{5, -1}));
}

TEST(Rotate, RoundTripAndChebyshev) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 100000; ++t) {
    const auto pts = testutil::grid_points(rng, 2, -1000000, 1000000);
    const Point back = unrotate45(rotate45(pts[0]), pts[0].id);
    ASSERT_EQ(back, pts[0]);
    ASSERT_EQ(dist_l1(pts[0], pts[1]), chebyshev(rotate45(pts[0]), rotate45(pts[1])));
  }
}

TEST(Dist, TriangleInequality) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 10000; ++t) {
    const auto p = testutil::grid_points(rng, 3, -1000, 1000);
    ASSERT_LE(dist_l1(p[0], p[2]), dist_l1(p[0], p[1]) + dist_l1(p[1], p[2]));
    const double lhs = dist(p[0], p[2], Metric::L2), rhs = dist(p[0], p[1], Metric::L2) + dist(p[1], p[2], Metric::L2);
    ASSERT_LE(lhs, rhs * (1 + 1e-12));
  }
}

TEST(CanonicalFrame, Offsets) {
  const auto f = CanonicalFrame::at({2, 5, 7});
  EXPECT_EQ(f.l_plus, 3);
  EXPECT_EQ(f.l_minus, 7);
  EXPECT_EQ(f.l_h, 5);
  EXPECT_EQ(f.l_v, 2);
}

TEST(Symmetry, InvertUndoesApply) {
  const Point p{3, -7, 4};
  for (int i = 0; i < 8; ++i) {
    const Symmetry s{(i & 4) != 0, (i & 1) != 0, (i & 2) != 0};
    EXPECT_EQ(s.invert(s.apply(p)), p);
  }
}

TEST(Validation, RejectsBadInput) {
  std::vector<Point> dup{{0, 0, 1}, {1, 1, 1}};
  EXPECT_THROW(require_unique_ids(dup), std::invalid_argument);
  std::vector<Point> nan{{0, std::nan(""), 0}};
  EXPECT_THROW(require_finite(nan), std::invalid_argument);
}
