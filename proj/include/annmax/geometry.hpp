#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <utility>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace annmax {

using PointId = std::int64_t;

/// A planar point carrying a stable index into the set it came from.
struct Point {
  double x = 0.0;
  double y = 0.0;
  PointId id = 0;

  friend bool operator==(const Point&, const Point&) = default;
};

enum class Metric { L1, L2 };

inline std::string to_string(Metric m) { return m == Metric::L1 ? "l1" : "l2"; }

inline bool same_location(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }

inline double dist_l1(const Point& p, const Point& q) { return std::abs(p.x - q.x) + std::abs(p.y - q.y); }

/// Squared Euclidean distance. Exact for integer coordinates below 2^26.
inline double dist2(const Point& p, const Point& q) {
  const double dx = p.x - q.x;
  const double dy = p.y - q.y;
  return dx * dx + dy * dy;
}

inline double dist(const Point& p, const Point& q, Metric m) {
  return m == Metric::L1 ? dist_l1(p, q) : std::sqrt(dist2(p, q));
}

/// Coordinates of a point after the 45 degree rotation u = x + y, v = x - y.
/// L1 distance in (x, y) equals Chebyshev distance in (u, v).
struct RotatedPoint {
  double u = 0.0;
  double v = 0.0;

  friend bool operator==(const RotatedPoint&, const RotatedPoint&) = default;
};

inline RotatedPoint rotate45(const Point& p) { return {p.x + p.y, p.x - p.y}; }

inline Point unrotate45(const RotatedPoint& r, PointId id = 0) { return {(r.u + r.v) / 2, (r.u - r.v) / 2, id}; }

inline double chebyshev(const RotatedPoint& a, const RotatedPoint& b) {
  return std::max(std::abs(a.u - b.u), std::abs(a.v - b.v));
}

/// The four axis and diagonal lines through a site, each kept as its offset:
/// slope +1 line y = x + (y-x), slope -1 line x + y = (x+y), y = const, x = const.
struct CanonicalFrame {
  Point site;
  double l_plus = 0.0;
  double l_minus = 0.0;
  double l_h = 0.0;
  double l_v = 0.0;

  static CanonicalFrame at(const Point& p) { return {p, p.y - p.x, p.x + p.y, p.y, p.x}; }
};

/// Element of the symmetry group of the axis-aligned square, applied as
/// optional transpose (x <-> y) followed by optional sign flips of x and y.
struct Symmetry {
  bool transpose = false;
  bool flip_x = false;
  bool flip_y = false;

  Point apply(const Point& p) const {
    double x = transpose ? p.y : p.x;
    double y = transpose ? p.x : p.y;
    return {flip_x ? -x : x, flip_y ? -y : y, p.id};
  }

  Point invert(const Point& p) const {
    const double x = flip_x ? -p.x : p.x;
    const double y = flip_y ? -p.y : p.y;
    return transpose ? Point{y, x, p.id} : Point{x, y, p.id};
  }

  friend bool operator==(const Symmetry&, const Symmetry&) = default;
};

/// Half-line from origin along (dx, dy).
struct Ray {
  Point origin;
  double dx = 0.0;
  double dy = 0.0;

  Point at(double t) const { return {origin.x + t * dx, origin.y + t * dy, 0}; }
};

/// Closed triangle.
struct Triangle {
  std::array<Point, 3> v;

  /// Twice the signed area, positive for counterclockwise order.
  double twice_area() const { return (v[1].x - v[0].x) * (v[2].y - v[0].y) - (v[1].y - v[0].y) * (v[2].x - v[0].x); }
  double area() const { return std::abs(twice_area()) / 2; }
};

/// The four reflections used as dragging frames, indexed 0..3: identity,
/// flip x, flip y, flip both.
inline Symmetry frame_symmetry(int frame) { return {false, (frame & 1) != 0, (frame & 2) != 0}; }

/// Axis-aligned rectangle; infinite bounds allowed.
struct Box {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;

  bool contains(const Point& p) const { return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax; }
  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double diagonal() const { return std::hypot(width(), height()); }

  static Box bounding(std::span<const Point> pts) {
    if (pts.empty()) throw std::invalid_argument("bounding box of empty set");
    Box b{pts[0].x, pts[0].y, pts[0].x, pts[0].y};
    for (const auto& p : pts) {
      b.xmin = std::min(b.xmin, p.x);
      b.ymin = std::min(b.ymin, p.y);
      b.xmax = std::max(b.xmax, p.x);
      b.ymax = std::max(b.ymax, p.y);
    }
    return b;
  }

  Box expanded(double margin) const { return {xmin - margin, ymin - margin, xmax + margin, ymax + margin}; }
};

inline void require_finite(std::span<const Point> pts) {
  for (const auto& p : pts)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw std::invalid_argument("non-finite coordinate for point " + std::to_string(p.id));
}

inline void require_unique_ids(std::span<const Point> pts) {
  std::unordered_set<PointId> seen;
  seen.reserve(pts.size() * 2);
  for (const auto& p : pts)
    if (!seen.insert(p.id).second) throw std::invalid_argument("duplicate point id " + std::to_string(p.id));
}

/// Points with ids 0..n-1 in input order.
inline std::vector<Point> make_points(std::span<const std::pair<double, double>> xy) {
  std::vector<Point> out;
  out.reserve(xy.size());
  for (std::size_t i = 0; i < xy.size(); ++i) out.push_back({xy[i].first, xy[i].second, static_cast<PointId>(i)});
  return out;
}

inline std::vector<Point> make_points(std::initializer_list<std::pair<double, double>> xy) {
  return make_points(std::span<const std::pair<double, double>>(xy.begin(), xy.size()));
}

}  // namespace annmax
