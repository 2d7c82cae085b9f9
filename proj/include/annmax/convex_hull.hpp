#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "annmax/geometry.hpp"
#include "annmax/predicates.hpp"

namespace annmax {

/// Convex hull in counterclockwise order starting at the lexicographically
/// smallest vertex, collinear points excluded. Coincident points collapse to
/// the one with the smallest id. One or two points are returned as is.
inline std::vector<Point> convex_hull(std::span<const Point> pts) {
  std::vector<Point> s(pts.begin(), pts.end());
  std::sort(s.begin(), s.end(), [](const Point& a, const Point& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.id < b.id;
  });
  s.erase(std::unique(s.begin(), s.end(), [](const Point& a, const Point& b) { return same_location(a, b); }), s.end());
  if (s.size() <= 2) return s;

  std::vector<Point> h(2 * s.size());
  std::size_t k = 0;
  for (const auto& p : s) {
    while (k >= 2 && predicates::orient2d(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  for (std::size_t i = s.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && predicates::orient2d(h[k - 2], h[k - 1], s[i]) <= 0) --k;
    h[k++] = s[i];
  }
  h.resize(k - 1);
  return h;
}

}  // namespace annmax
