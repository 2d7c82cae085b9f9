#pragma once

// L1 farthest-point Voronoi diagram of the diagonal extremes of a query set.
//
// Under the rotation u = x + y, v = x - y the L1 distance becomes Chebyshev
// distance, so for any p the aggregate value is
//
//   g(p) = max(u(p) - min u, max u - u(p), v(p) - min v, max v - v(p)),
//
// one term per diagonal extreme. The region where a given term is largest is
// a "wedge": the intersection of two axis-parallel half-planes and one
// diagonal half-plane. A cell of the diagram is the union of the wedges of the
// roles its owner holds.

#include <algorithm>
#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "annmax/geometry.hpp"

namespace annmax {

/// Diagonal directions, in the order q1..q4.
enum class Role : int { NE = 0, NW = 1, SW = 2, SE = 3 };

inline constexpr std::array<Role, 4> kRoles = {Role::NE, Role::NW, Role::SW, Role::SE};

namespace detail {

/// Value of the diagonal functional that a role maximizes.
inline double role_functional(Role r, const Point& p) {
  switch (r) {
    case Role::NE: return p.x + p.y;
    case Role::NW: return p.y - p.x;
    case Role::SW: return -(p.x + p.y);
    case Role::SE: return p.x - p.y;
  }
  return 0.0;
}

inline std::array<int, 2> role_direction(Role r) {
  switch (r) {
    case Role::NE: return {1, 1};
    case Role::NW: return {-1, 1};
    case Role::SW: return {-1, -1};
    case Role::SE: return {1, -1};
  }
  return {0, 0};
}

inline Role role_from_direction(int dx, int dy) {
  if (dx > 0) return dy > 0 ? Role::NE : Role::SE;
  return dy > 0 ? Role::NW : Role::SW;
}

/// Image of a role under a symmetry of the square.
inline Role map_role(const Symmetry& s, Role r) {
  auto [dx, dy] = role_direction(r);
  if (s.transpose) std::swap(dx, dy);
  if (s.flip_x) dx = -dx;
  if (s.flip_y) dy = -dy;
  return role_from_direction(dx, dy);
}

}  // namespace detail

/// The frame (see frame_symmetry) whose reflection takes a role to the
/// south-west position.
inline int role_frame(Role r) {
  switch (r) {
    case Role::SW: return 0;
    case Role::SE: return 1;
    case Role::NW: return 2;
    case Role::NE: return 3;
  }
  return 0;
}

struct QueryExtremes {
  /// Holder of each role, q[0..3] = NE, NW, SW, SE.
  std::array<Point, 4> q;
  /// Physically distinct survivors after redundancy removal, by increasing id.
  std::vector<Point> distinct;

  const Point& holder(Role r) const { return q[static_cast<int>(r)]; }
};

namespace detail {

inline bool is_extreme_subset(std::span<const Point> subset, const std::array<double, 4>& best) {
  for (Role r : kRoles) {
    bool hit = false;
    for (const auto& p : subset) hit = hit || role_functional(r, p) == best[static_cast<int>(r)];
    if (!hit) return false;
  }
  return true;
}

inline void assign_roles(QueryExtremes& e, const std::array<double, 4>& best) {
  for (Role r : kRoles) {
    for (const auto& p : e.distinct) {  // ascending id, so first hit wins ties
      if (role_functional(r, p) == best[static_cast<int>(r)]) {
        e.q[static_cast<int>(r)] = p;
        break;
      }
    }
  }
}

}  // namespace detail

/// Diagonal extremes of Q with redundant members removed. One pass over Q.
inline QueryExtremes compute_qmax(std::span<const Point> Q) {
  if (Q.empty()) throw std::invalid_argument("empty query set");
  std::array<double, 4> best{};
  std::array<Point, 4> pick{};
  for (Role r : kRoles) {
    best[static_cast<int>(r)] = detail::role_functional(r, Q[0]);
    pick[static_cast<int>(r)] = Q[0];
  }
  for (const auto& p : Q) {
    for (Role r : kRoles) {
      const int i = static_cast<int>(r);
      const double f = detail::role_functional(r, p);
      if (f > best[i] || (f == best[i] && p.id < pick[i].id)) {
        best[i] = f;
        pick[i] = p;
      }
    }
  }

  QueryExtremes e;
  for (const auto& p : pick)
    if (std::none_of(e.distinct.begin(), e.distinct.end(), [&](const Point& d) { return d.id == p.id; }))
      e.distinct.push_back(p);
  std::sort(e.distinct.begin(), e.distinct.end(), [](const Point& a, const Point& b) { return a.id < b.id; });
  detail::assign_roles(e, best);

  // Drop redundant members until none is left, trying NE, NW, SW, SE holders in turn.
  bool changed = true;
  while (changed && e.distinct.size() > 1) {
    changed = false;
    for (Role r : kRoles) {
      const PointId victim = e.holder(r).id;
      std::vector<Point> rest;
      for (const auto& p : e.distinct)
        if (p.id != victim) rest.push_back(p);
      if (detail::is_extreme_subset(rest, best)) {
        e.distinct = std::move(rest);
        detail::assign_roles(e, best);
        changed = true;
        break;
      }
    }
  }
  return e;
}

/// max over the distinct extremes of d(p, q). Equals g(p, Q) for L1.
inline double g_value(const Point& p, const QueryExtremes& e, Metric m) {
  double g = 0.0;
  for (const auto& q : e.distinct) g = std::max(g, dist(p, q, m));
  return g;
}

// ---------------------------------------------------------------------------
// Bisectors

enum class BisectorKind { Vertical, Horizontal, Line };

/// L1 bisector of two sites: a middle segment of slope +1 or -1 plus two
/// parallel rays. For axis-aligned sites the middle segment degenerates to
/// the midpoint and the rays form the perpendicular line.
struct Bisector {
  BisectorKind kind = BisectorKind::Line;
  Point a;  // middle segment end where the first ray starts
  Point b;  // middle segment end where the second ray starts
  std::array<Ray, 2> rays;

  int middle_slope() const {
    if (a.x == b.x) return 0;
    return ((b.y - a.y) > 0) == ((b.x - a.x) > 0) ? 1 : -1;
  }
};

/// When the bounding rectangle of the two sites is a square, the two
/// equidistant quadrants are represented by their vertical bounding rays.
inline Bisector bisector(const Point& q, const Point& q2) {
  if (same_location(q, q2)) throw std::invalid_argument("coincident sites");
  const double dx = q2.x - q.x;
  const double dy = q2.y - q.y;
  const Point mid{(q.x + q2.x) / 2, (q.y + q2.y) / 2, 0};
  Bisector b;
  if (dx == 0.0 || dy == 0.0) {
    b.kind = BisectorKind::Line;
    b.a = b.b = mid;
    if (dx == 0.0) {
      b.rays = {Ray{mid, -1, 0}, Ray{mid, 1, 0}};
    } else {
      b.rays = {Ray{mid, 0, 1}, Ray{mid, 0, -1}};
    }
    return b;
  }
  // The middle segment lies on the line through the midpoint with slope -1
  // when the sites are NE/SW of each other, slope +1 otherwise.
  const double slope = (dx > 0) == (dy > 0) ? -1.0 : 1.0;
  const double xlo = std::min(q.x, q2.x), xhi = std::max(q.x, q2.x);
  const double ylo = std::min(q.y, q2.y), yhi = std::max(q.y, q2.y);
  auto x_at = [&](double y) { return mid.x + (y - mid.y) / slope; };
  auto y_at = [&](double x) { return mid.y + (x - mid.x) * slope; };
  if (std::abs(dx) >= std::abs(dy)) {
    b.kind = BisectorKind::Vertical;
    b.a = {x_at(yhi), yhi, 0};
    b.b = {x_at(ylo), ylo, 0};
    b.rays = {Ray{b.a, 0, 1}, Ray{b.b, 0, -1}};
  } else {
    b.kind = BisectorKind::Horizontal;
    b.a = {xlo, y_at(xlo), 0};
    b.b = {xhi, y_at(xhi), 0};
    b.rays = {Ray{b.a, -1, 0}, Ray{b.b, 1, 0}};
  }
  return b;
}

// ---------------------------------------------------------------------------
// Cells

/// Region where one role's term attains g, expressed in that role's frame
/// (role_frame): { x' >= a, y' >= b, x' + y' >= c }. Distance to the owner
/// over the wedge is (x' + y') - owner_key.
struct RoleWedge {
  Role role = Role::SW;
  int frame = 0;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double owner_key = 0.0;

  bool contains(const Point& p) const {
    const Point s = frame_symmetry(frame).apply(p);
    return s.x >= a && s.y >= b && s.x + s.y >= c;
  }

  /// The diagonal side is implied by the two axis sides.
  bool is_quadrant() const { return c <= a + b; }
};

enum class CellShape { TypeA, TypeB, TypeC, HalfPlane, WholePlane };

inline const char* to_string(CellShape s) {
  switch (s) {
    case CellShape::TypeA: return "A";
    case CellShape::TypeB: return "B";
    case CellShape::TypeC: return "C";
    case CellShape::HalfPlane: return "half-plane";
    case CellShape::WholePlane: return "whole-plane";
  }
  return "?";
}

/// One closed cell of the diagram.
///
/// `orientation` maps world coordinates to the canonical frame where the
/// owner sits south-west. In that frame:
///   TypeA/TypeC: x >= X(y), X piecewise linear through v1 (upper) and v2;
///   TypeB:       x >= v1.x, y >= v2.y, x + y >= v1.x + v1.y;
///   HalfPlane:   y >= v1.y or x >= v2.x or x + y >= v1.x + v1.y
///                (complement of the opposite owner's wedge);
///   WholePlane:  everything.
/// v1 and v2 are reported in world coordinates.
struct L1Cell {
  Point owner;
  CellShape shape = CellShape::WholePlane;
  Point v1;
  Point v2;
  Symmetry orientation;
  std::vector<RoleWedge> wedges;

  bool contains(const Point& p) const {
    return std::any_of(wedges.begin(), wedges.end(), [&](const RoleWedge& w) { return w.contains(p); });
  }

  /// Membership reconstructed from (shape, v1, v2, orientation) alone.
  bool contains_by_shape(const Point& p) const {
    const Point s = orientation.apply(p);
    const Point c1 = orientation.apply(v1);
    const Point c2 = orientation.apply(v2);
    switch (shape) {
      case CellShape::WholePlane: return true;
      case CellShape::TypeB: return s.x >= c1.x && s.y >= c2.y && s.x + s.y >= c1.x + c1.y;
      case CellShape::HalfPlane: return s.y >= c1.y || s.x >= c2.x || s.x + s.y >= c1.x + c1.y;
      case CellShape::TypeA:
      case CellShape::TypeC: {
        double bound;
        if (s.y >= c1.y) {
          bound = c1.x;
        } else if (s.y <= c2.y) {
          bound = c2.x;
        } else {
          // Middle segment has slope -1 (TypeA) or +1 (TypeC).
          bound = shape == CellShape::TypeA ? c1.x + (c1.y - s.y) : c2.x + (s.y - c2.y);
        }
        return s.x >= bound;
      }
    }
    return false;
  }

  double distance_to_owner(const Point& p) const { return dist_l1(p, owner); }
};

namespace detail {

struct Extents {
  double umin, umax, vmin, vmax;
};

inline Extents extents_of(std::span<const Point> pts) {
  Extents e{pts[0].x + pts[0].y, pts[0].x + pts[0].y, pts[0].x - pts[0].y, pts[0].x - pts[0].y};
  for (const auto& p : pts) {
    e.umin = std::min(e.umin, p.x + p.y);
    e.umax = std::max(e.umax, p.x + p.y);
    e.vmin = std::min(e.vmin, p.x - p.y);
    e.vmax = std::max(e.vmax, p.x - p.y);
  }
  return e;
}

inline RoleWedge make_wedge(Role r, std::span<const Point> distinct, const Point& owner) {
  RoleWedge w;
  w.role = r;
  w.frame = role_frame(r);
  const Symmetry s = frame_symmetry(w.frame);
  std::vector<Point> mapped;
  mapped.reserve(distinct.size());
  for (const auto& p : distinct) mapped.push_back(s.apply(p));
  const Extents ex = extents_of(mapped);
  w.a = (ex.umin + ex.vmax) / 2;
  w.b = (ex.umin - ex.vmin) / 2;
  w.c = (ex.umax + ex.umin) / 2;
  const Point o = s.apply(owner);
  w.owner_key = o.x + o.y;
  return w;
}

using RoleSet = std::array<bool, 4>;

inline RoleSet map_roles(const Symmetry& s, const RoleSet& roles) {
  RoleSet out{};
  for (Role r : kRoles)
    if (roles[static_cast<int>(r)]) out[static_cast<int>(map_role(s, r))] = true;
  return out;
}

inline std::array<Symmetry, 8> all_symmetries() {
  std::array<Symmetry, 8> out{};
  for (int i = 0; i < 8; ++i) out[i] = {(i & 4) != 0, (i & 1) != 0, (i & 2) != 0};
  return out;
}

}  // namespace detail

/// One closed cell per distinct extreme, in the order of e.distinct.
inline std::vector<L1Cell> build_cells(const QueryExtremes& e) {
  using detail::RoleSet;
  std::vector<L1Cell> cells;
  for (const auto& owner : e.distinct) {
    L1Cell cell;
    cell.owner = owner;
    RoleSet roles{};
    int count = 0;
    for (Role r : kRoles) {
      if (e.holder(r).id == owner.id) {
        roles[static_cast<int>(r)] = true;
        ++count;
        cell.wedges.push_back(detail::make_wedge(r, e.distinct, owner));
      }
    }

    // Canonical role sets: {SW}, {SW, NW}, {NW, SW, SE}, all four.
    RoleSet target{};
    target[static_cast<int>(Role::SW)] = true;
    if (count >= 2) target[static_cast<int>(Role::NW)] = true;
    if (count >= 3) target[static_cast<int>(Role::SE)] = true;
    if (count == 4) target[static_cast<int>(Role::NE)] = true;
    bool found = false;
    for (const auto& s : detail::all_symmetries()) {
      if (detail::map_roles(s, roles) == target) {
        cell.orientation = s;
        found = true;
        break;
      }
    }
    if (!found) throw std::logic_error("owner roles are not contiguous");

    std::vector<Point> canon;
    for (const auto& p : e.distinct) canon.push_back(cell.orientation.apply(p));
    const auto ex = detail::extents_of(canon);
    const double x0 = (ex.umin + ex.vmax) / 2;  // SW wedge: x >= x0
    const double y0 = (ex.umin - ex.vmin) / 2;  //           y >= y0
    const double c0 = (ex.umax + ex.umin) / 2;  //           x + y >= c0
    const double x1 = (ex.umax + ex.vmin) / 2;  // NW wedge: x >= x1
    const double vv = (ex.vmin + ex.vmax) / 2;  //           x - y >= vv
    const double y1 = (ex.umax - ex.vmax) / 2;  // SE wedge: y >= y1

    Point c1{}, c2{};
    switch (count) {
      case 1:
        cell.shape = CellShape::TypeB;
        c1 = {x0, std::max(c0 - x0, y0), 0};
        c2 = {std::max(c0 - y0, x0), y0, 0};
        break;
      case 2:
        if (c0 - y0 > x0) {
          cell.shape = CellShape::TypeA;
          c1 = {x0, c0 - x0, 0};
          c2 = {c0 - y0, y0, 0};
        } else if (vv + y0 > x1) {
          cell.shape = CellShape::TypeC;
          c1 = {vv + y0, y0, 0};
          c2 = {x1, x1 - vv, 0};
        } else {
          cell.shape = CellShape::TypeA;
          c1 = c2 = {x0, y0, 0};
        }
        break;
      case 3:
        cell.shape = CellShape::HalfPlane;
        c1 = {std::min(c0 - y1, x1), y1, 0};
        c2 = {x1, std::min(c0 - x1, y1), 0};
        break;
      default:
        cell.shape = CellShape::WholePlane;
        c1 = c2 = cell.orientation.apply(owner);
        break;
    }
    cell.v1 = cell.orientation.invert(c1);
    cell.v2 = cell.orientation.invert(c2);
    cell.v1.id = cell.v2.id = owner.id;
    cells.push_back(std::move(cell));
  }
  return cells;
}

/// Owner under the tie rule: among cells whose closed region contains p,
/// the one whose owner has the smallest id.
inline std::optional<Point> owner_of(std::span<const L1Cell> cells, const Point& p) {
  std::optional<Point> best;
  for (const auto& c : cells)
    if (c.contains(p) && (!best || c.owner.id < best->id)) best = c.owner;
  return best;
}

}  // namespace annmax
