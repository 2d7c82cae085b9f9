#include <gtest/gtest.h>

#include <random>

#include "annmax/farthest_voronoi.hpp"
#include "support.hpp"

using namespace annmax;

namespace {

long long cross(const Point& o, const Point& a, const Point& b) {
  return static_cast<long long>(a.x - o.x) * static_cast<long long>(b.y - o.y) -
         static_cast<long long>(a.y - o.y) * static_cast<long long>(b.x - o.x);
}

// Jarvis march on integer points: the next vertex has every other point to
// its left or, if collinear, no farther along.
std::vector<Point> gift_wrap(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    return std::tie(a.x, a.y, a.id) < std::tie(b.x, b.y, b.id);
  });
  pts.erase(std::unique(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return same_location(a, b); }),
            pts.end());
  if (pts.size() <= 2) return pts;
  std::vector<Point> hull;
  Point cur = pts[0];
  do {
    hull.push_back(cur);
    Point cand = pts[0].id == cur.id ? pts[1] : pts[0];
    for (const auto& p : pts) {
      if (p.id == cur.id) continue;
      const long long c = cross(cur, cand, p);
      if (c < 0 || (c == 0 && dist2(cur, p) > dist2(cur, cand))) cand = p;
    }
    cur = cand;
  } while (cur.id != hull[0].id && hull.size() <= pts.size());
  return hull;
}

double polygon_area(const std::vector<Point>& poly) {
  double a = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point &p = poly[i], &q = poly[(i + 1) % poly.size()];
    a += p.x * q.y - q.x * p.y;
  }
  return std::abs(a) / 2;
}

std::vector<Point> ids_from_zero(std::vector<Point> v) {
  for (std::size_t i = 0; i < v.size(); ++i) v[i].id = static_cast<PointId>(i);
  return v;
}

}  // namespace

TEST(ConvexHull, SquareWithCenter) {
  const auto h = convex_hull(make_points({{0, 0}, {2, 0}, {2, 2}, {0, 2}, {1, 1}}));
  ASSERT_EQ(h.size(), 4u);
  EXPECT_EQ(h[0], (Point{0, 0, 0}));
  EXPECT_EQ(h[1], (Point{2, 0, 1}));
  EXPECT_EQ(h[2], (Point{2, 2, 2}));
}

TEST(ConvexHull, CollinearGivesEndpoints) {
  const auto h = convex_hull(make_points({{1, 1}, {3, 3}, {0, 0}, {2, 2}}));
  ASSERT_EQ(h.size(), 2u);
  EXPECT_EQ(h[0].id, 2);
  EXPECT_EQ(h[1].id, 1);
}

TEST(ConvexHull, MatchesGiftWrapping) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 2000; ++t) {
    const auto pts = testutil::grid_points(rng, testutil::uniform_int(rng, 1, 100), 0, t % 2 ? 10 : 1000);
    const auto h = convex_hull(pts);
    const auto want = gift_wrap(pts);
    ASSERT_EQ(h.size(), want.size()) << t;
    for (std::size_t i = 0; i < h.size(); ++i) ASSERT_EQ(h[i], want[i]) << t;
  }
}

TEST(FarthestVd, TwoSites) {
  const auto d = farthest_vd(make_points({{0, 0}, {4, 0}}));
  ASSERT_EQ(d.cells.size(), 2u);
  EXPECT_TRUE(d.cells[0].contains({10, 0, 0}));
  EXPECT_FALSE(d.cells[1].contains({10, 0, 0}));
  EXPECT_TRUE(d.cells[0].contains({2, 7, 0}));
  EXPECT_TRUE(d.cells[1].contains({2, 7, 0}));
  EXPECT_FALSE(d.cells[0].contains({1.5, 0, 0}));
}

TEST(FarthestVd, TriangleMeetsAtCircumcenter) {
  const auto d = farthest_vd(make_points({{0, 0}, {6, 0}, {3, 5}}));
  ASSERT_EQ(d.triangles.size(), 1u);
  const Point cc = detail::circumcenter(d.hull[0], d.hull[1], d.hull[2]);
  for (const auto& c : d.cells) {
    ASSERT_EQ(c.vertices.size(), 1u);
    EXPECT_NEAR(c.vertices[0].x, cc.x, 1e-12);
    EXPECT_NEAR(c.vertices[0].y, cc.y, 1e-12);
    EXPECT_EQ(c.rays.size(), 2u);
  }
}

TEST(FarthestVd, SizeIsLinearInHull) {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 200; ++t) {
    const auto d = farthest_vd(testutil::grid_points(rng, 60, 0, 1000));
    const std::size_t m = d.hull.size();
    if (m < 3) continue;
    ASSERT_EQ(d.triangles.size(), m - 2);
    std::size_t degree = 0;
    for (const auto& c : d.cells) degree += c.neighbors.size();
    ASSERT_EQ(degree, 2 * (2 * m - 3));
  }
}

TEST(FarthestVd, MembershipMatchesArgmaxOnGrid) {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 1500; ++t) {
    const auto Q = testutil::grid_points(rng, testutil::uniform_int(rng, 1, 30), 0, t % 3 == 0 ? 6 : 40);
    const auto d = farthest_vd(Q);
    const double lo = -20, step = t % 3 == 0 ? 0.5 : 1.5;
    for (int i = 0; i <= 60; ++i) {
      for (int j = 0; j <= 60; ++j) {
        const double x = lo + i * step, y = lo + j * step;
        const Point p{x, y, 0};
        double far = 0;
        for (const auto& q : Q) far = std::max(far, dist2(p, q));
        int owners = 0;
        for (const auto& c : d.cells) {
          const bool is_far = dist2(p, c.owner) == far;
          ASSERT_EQ(c.contains(p), is_far) << "trial " << t << " at " << x << "," << y;
          owners += is_far;
        }
        ASSERT_GE(owners, 1);
      }
    }
  }
}

TEST(TriangulateCell, HalfPlaneInUnitBoxGivesTwoTriangles) {
  const auto d = farthest_vd(make_points({{-1, 0.5}, {3, 0.5}}));
  const auto t = triangulate_cell(d.cells[1], Box{0, 0, 1, 1});
  ASSERT_EQ(t.triangles.size(), 2u);
  EXPECT_DOUBLE_EQ(t.triangles[0].area() + t.triangles[1].area(), 1.0);
}

TEST(TriangulateCell, DisjointCellIsEmpty) {
  const auto d = farthest_vd(make_points({{0, 0}, {4, 0}}));
  EXPECT_TRUE(triangulate_cell(d.cells[1], Box{3, 0, 5, 1}).triangles.empty());
}

TEST(TriangulateCell, AreasAddUp) {
  std::mt19937_64 rng(44);
  for (int t = 0; t < 1000; ++t) {
    const auto Q = testutil::grid_points(rng, testutil::uniform_int(rng, 1, 30), 0, 100);
    const auto P = testutil::grid_points(rng, 20, -50, 150);
    const Box box = clip_box_for(P);
    const auto d = farthest_vd(Q);
    double total = 0;
    for (const auto& c : d.cells) {
      const auto tri = triangulate_cell(c, box);
      double sum = 0;
      for (const auto& tr : tri.triangles) {
        ASSERT_GT(tr.twice_area(), 0);
        sum += tr.area();
      }
      ASSERT_NEAR(sum, polygon_area(clip_cell(c, box)), 1e-9 * std::max(1.0, sum));
      total += sum;
    }
    const double box_area = box.width() * box.height();
    ASSERT_NEAR(total, box_area, 1e-9 * box_area);
  }
}

TEST(TriangulateCell, EveryPointIsCoveredByItsFarthestCell) {
  std::mt19937_64 rng(45);
  for (int t = 0; t < 500; ++t) {
    const auto Q = testutil::grid_points(rng, testutil::uniform_int(rng, 1, 30), 0, 100);
    const auto P = ids_from_zero(testutil::grid_points(rng, 100, -50, 150));
    const Box box = clip_box_for(P);
    const auto d = farthest_vd(Q);
    for (const auto& p : P) {
      ASSERT_TRUE(box.contains(p));
      int cells = 0;
      for (const auto& c : d.cells)
        if (c.contains(p)) ++cells;
      ASSERT_GE(cells, 1);
    }
  }
}
