#pragma once

// Euclidean farthest-point Voronoi diagram of a convex polygon.
//
// The dual farthest-point Delaunay triangulation is built by repeatedly
// removing the hull vertex whose circle through it and its two current
// neighbours is largest (ties: larger angle at the vertex); each removal
// contributes one triangle. A cell is then the intersection of the
// half-planes against its Delaunay neighbours.

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <span>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "annmax/convex_hull.hpp"
#include "annmax/geometry.hpp"
#include "annmax/predicates.hpp"

namespace annmax {

/// Closed half-plane a x + b y >= c.
struct HalfPlane {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  double eval(const Point& p) const { return a * p.x + b * p.y - c; }

  /// Points at least as far from `far` as from `other`.
  static HalfPlane farther_from(const Point& far, const Point& other) {
    return {2 * (other.x - far.x), 2 * (other.y - far.y),
            (other.x * other.x + other.y * other.y) - (far.x * far.x + far.y * far.y)};
  }
};

struct FarthestCell {
  Point owner;
  std::size_t hull_index = 0;
  /// Delaunay neighbours (hull indices), counterclockwise around the owner.
  std::vector<std::size_t> neighbors;
  /// Finite Voronoi vertices along the boundary, from the ray shared with the
  /// next hull vertex to the ray shared with the previous one.
  std::vector<Point> vertices;
  /// Unbounded boundary edges; none for a single site.
  std::vector<Ray> rays;
  std::vector<HalfPlane> constraints;

  bool contains(const Point& p) const {
    return std::all_of(constraints.begin(), constraints.end(), [&](const HalfPlane& h) { return h.eval(p) >= 0; });
  }
};

struct FarthestDiagram {
  std::vector<Point> hull;
  std::vector<std::array<std::size_t, 3>> triangles;  // farthest Delaunay, hull indices
  std::vector<FarthestCell> cells;                   // cells[i] belongs to hull[i]
};

namespace detail {

inline Point circumcenter(const Point& a, const Point& b, const Point& c) {
  const double bx = b.x - a.x, by = b.y - a.y;
  const double cx = c.x - a.x, cy = c.y - a.y;
  const double d = 2 * (bx * cy - by * cx);
  const double b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
  return {a.x + (cy * b2 - by * c2) / d, a.y + (bx * c2 - cx * b2) / d, 0};
}

inline double circumradius2(const Point& a, const Point& b, const Point& c) {
  const double cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  return dist2(a, b) * dist2(b, c) * dist2(c, a) / (4 * cross * cross);
}

inline double angle_at(const Point& prev, const Point& p, const Point& next) {
  const double ux = prev.x - p.x, uy = prev.y - p.y, vx = next.x - p.x, vy = next.y - p.y;
  return std::atan2(std::abs(ux * vy - uy * vx), ux * vx + uy * vy);
}

}  // namespace detail

/// Farthest-point Delaunay triangulation of a strictly convex counterclockwise
/// polygon with at least three vertices. O(m log m).
inline std::vector<std::array<std::size_t, 3>> farthest_delaunay(std::span<const Point> hull) {
  const std::size_t m = hull.size();
  if (m < 3) return {};
  std::vector<std::size_t> prev(m), next(m);
  for (std::size_t i = 0; i < m; ++i) {
    prev[i] = (i + m - 1) % m;
    next[i] = (i + 1) % m;
  }
  using Key = std::tuple<double, double, std::size_t>;
  std::vector<Key> key(m);
  std::set<Key> order;
  auto refresh = [&](std::size_t i) {
    order.erase(key[i]);
    const Point &a = hull[prev[i]], &b = hull[i], &c = hull[next[i]];
    key[i] = {detail::circumradius2(a, b, c), detail::angle_at(a, b, c), i};
    order.insert(key[i]);
  };
  for (std::size_t i = 0; i < m; ++i) {
    const Point &a = hull[prev[i]], &b = hull[i], &c = hull[next[i]];
    key[i] = {detail::circumradius2(a, b, c), detail::angle_at(a, b, c), i};
    order.insert(key[i]);
  }

  std::vector<std::array<std::size_t, 3>> tris;
  for (std::size_t left = m; left > 3; --left) {
    const std::size_t i = std::get<2>(*order.rbegin());
    order.erase(std::prev(order.end()));
    tris.push_back({prev[i], i, next[i]});
    next[prev[i]] = next[i];
    prev[next[i]] = prev[i];
    refresh(prev[i]);
    refresh(next[i]);
  }
  const std::size_t i = std::get<2>(*order.begin());
  tris.push_back({prev[i], i, next[i]});
  return tris;
}

/// Farthest-point Voronoi diagram of the hull of `sites`.
inline FarthestDiagram farthest_vd(std::span<const Point> sites) {
  if (sites.empty()) throw std::invalid_argument("empty query set");
  FarthestDiagram d;
  d.hull = convex_hull(sites);
  const std::size_t m = d.hull.size();
  d.cells.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    d.cells[i].owner = d.hull[i];
    d.cells[i].hull_index = i;
  }
  if (m == 1) return d;
  if (m == 2) {
    const Point &a = d.hull[0], &b = d.hull[1];
    const Point mid{(a.x + b.x) / 2, (a.y + b.y) / 2, 0};
    const double nx = -(b.y - a.y), ny = b.x - a.x;
    for (std::size_t i = 0; i < 2; ++i) {
      auto& c = d.cells[i];
      c.neighbors = {1 - i};
      c.rays = {Ray{mid, nx, ny}, Ray{mid, -nx, -ny}};
      c.constraints = {HalfPlane::farther_from(d.hull[i], d.hull[1 - i])};
    }
    return d;
  }

  d.triangles = farthest_delaunay(d.hull);
  for (const auto& t : d.triangles) {
    for (int k = 0; k < 3; ++k) {
      auto& nb = d.cells[t[k]].neighbors;
      for (int j = 1; j < 3; ++j) {
        const std::size_t o = t[(k + j) % 3];
        if (std::find(nb.begin(), nb.end(), o) == nb.end()) nb.push_back(o);
      }
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    auto& c = d.cells[i];
    const Point& o = d.hull[i];
    std::sort(c.neighbors.begin(), c.neighbors.end(), [&](std::size_t a, std::size_t b) {
      return predicates::orient2d(o, d.hull[a], d.hull[b]) > 0;
    });
    for (std::size_t k = 0; k + 1 < c.neighbors.size(); ++k)
      c.vertices.push_back(detail::circumcenter(o, d.hull[c.neighbors[k]], d.hull[c.neighbors[k + 1]]));
    for (const auto n : c.neighbors) c.constraints.push_back(HalfPlane::farther_from(o, d.hull[n]));
    const Point& nx = d.hull[(i + 1) % m];
    const Point& pv = d.hull[(i + m - 1) % m];
    c.rays = {Ray{c.vertices.front(), -(nx.y - o.y), nx.x - o.x}, Ray{c.vertices.back(), -(o.y - pv.y), o.x - pv.x}};
  }
  return d;
}

/// Convex polygon (counterclockwise) of the cell inside the box.
inline std::vector<Point> clip_cell(const FarthestCell& cell, const Box& box) {
  std::vector<Point> poly{{box.xmin, box.ymin, 0}, {box.xmax, box.ymin, 0}, {box.xmax, box.ymax, 0}, {box.xmin, box.ymax, 0}};
  for (const auto& h : cell.constraints) {
    std::vector<Point> out;
    for (std::size_t i = 0; i < poly.size() && !poly.empty(); ++i) {
      const Point& p = poly[i];
      const Point& q = poly[(i + 1) % poly.size()];
      const double fp = h.eval(p), fq = h.eval(q);
      if (fp >= 0) out.push_back(p);
      if ((fp > 0 && fq < 0) || (fp < 0 && fq > 0)) {
        const double t = fp / (fp - fq);
        out.push_back({p.x + (q.x - p.x) * t, p.y + (q.y - p.y) * t, 0});
      }
    }
    poly = std::move(out);
  }
  return poly;
}

struct TriangulatedCell {
  Point owner;
  std::vector<Triangle> triangles;
};

/// Fan triangulation of the clipped cell; zero-area triangles are dropped, so
/// a degenerate or empty clipped cell yields no triangles.
inline TriangulatedCell triangulate_cell(const FarthestCell& cell, const Box& box) {
  TriangulatedCell t{cell.owner, {}};
  const auto poly = clip_cell(cell, box);
  for (std::size_t i = 1; i + 1 < poly.size(); ++i)
    if (predicates::orient2d(poly[0], poly[i], poly[i + 1]) > 0) t.triangles.push_back({{poly[0], poly[i], poly[i + 1]}});
  return t;
}

/// Bounding box of P grown by its own diagonal on every side.
inline Box clip_box_for(std::span<const Point> P) {
  const Box b = Box::bounding(P);
  return b.expanded(std::max(b.diagonal(), 1.0));
}

}  // namespace annmax
