#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "annmax/drag_index.hpp"
#include "annmax/geometry.hpp"

namespace annmax::testutil {

/// Points on the integer grid [lo, hi]^2 with ids 0..n-1.
inline std::vector<Point> grid_points(std::mt19937_64& rng, std::size_t n, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  std::vector<Point> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = d(rng);
    const double y = d(rng);
    out[i] = {x, y, static_cast<PointId>(i)};
  }
  return out;
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Random query with small coordinates so that ties and boundary hits happen.
inline DragQuery random_drag_query(std::mt19937_64& rng, int lo, int hi) {
  auto coord = [&] { return static_cast<double>(uniform_int(rng, lo, hi)); };
  const int slope = uniform_int(rng, 0, 1) ? 1 : -1;
  const auto dir = uniform_int(rng, 0, 1) ? DragDirection::Increasing : DragDirection::Decreasing;
  DragQuery q;
  if (uniform_int(rng, 0, 1)) {
    const auto axis = uniform_int(rng, 0, 1) ? TrackAxis::Horizontal : TrackAxis::Vertical;
    double a = coord(), b = coord();
    if (a > b) std::swap(a, b);
    q = DragQuery::parallel({axis, a, uniform_int(rng, 0, 3) != 0}, {axis, b, uniform_int(rng, 0, 3) != 0},
                            slope, dir);
  } else {
    q = DragQuery::out_of({coord(), coord(), 0}, static_cast<Quadrant>(uniform_int(rng, 0, 3)));
    q.corner_x_closed = uniform_int(rng, 0, 3) != 0;
    q.corner_y_closed = uniform_int(rng, 0, 3) != 0;
  }
  if (uniform_int(rng, 0, 2) == 0)
    q.after = DragBound{static_cast<double>(uniform_int(rng, 2 * lo, 2 * hi)), uniform_int(rng, -1, 50)};
  return q;
}

}  // namespace annmax::testutil
