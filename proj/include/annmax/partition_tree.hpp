#pragma once

// Partition tree over P answering "nearest point of P inside a triangle".
//
// Each internal node splits its points into about sqrt(n_v) classes of
// near-equal size (vertical strips, then rows inside each strip) and keeps a
// nearest-neighbour index over all its points. A query descends only into
// children whose bounding box crosses the triangle boundary; children lying
// inside the triangle are answered by their index and disjoint ones skipped.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "annmax/delaunay.hpp"
#include "annmax/geometry.hpp"
#include "annmax/predicates.hpp"

namespace annmax {

struct PartitionNode {
  Box region;                          // bounding box of the subset
  std::uint32_t begin = 0;             // subset = points[begin, end)
  std::uint32_t end = 0;
  std::vector<std::uint32_t> children;  // empty for a leaf
  NearestNeighborIndex nn;             // internal nodes only
  std::uint32_t depth = 0;

  bool leaf() const { return children.empty(); }
  std::size_t size() const { return end - begin; }
};

struct NearestHit {
  Point point;
  double d2 = 0.0;  // squared distance to the query point

  friend bool operator==(const NearestHit&, const NearestHit&) = default;
};

inline bool hit_less(const NearestHit& a, const NearestHit& b) {
  if (a.d2 != b.d2) return a.d2 < b.d2;
  return a.point.id < b.point.id;
}

/// A closed triangle, optionally grown by `tol` on every side.
class TriangleRegion {
 public:
  TriangleRegion(const Triangle& t, double tol) : tol_(tol) {
    v_ = t.v;
    const int o = predicates::orient2d(v_[0], v_[1], v_[2]);
    if (o == 0) throw std::invalid_argument("degenerate triangle");
    if (o < 0) std::swap(v_[1], v_[2]);
    for (int i = 0; i < 3; ++i) {
      const Point& a = v_[i];
      const Point& b = v_[(i + 1) % 3];
      len_[i] = std::hypot(b.x - a.x, b.y - a.y);
    }
    bbox_ = Box::bounding(v_).expanded(tol_);
  }

  /// Signed distance of p to the supporting line of edge i, positive inside.
  double edge_distance(int i, const Point& p) const {
    const Point& a = v_[i];
    const Point& b = v_[(i + 1) % 3];
    return ((b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x)) / len_[i];
  }

  bool contains(const Point& p) const {
    if (tol_ == 0.0) {
      for (int i = 0; i < 3; ++i)
        if (predicates::orient2d(v_[i], v_[(i + 1) % 3], p) < 0) return false;
      return true;
    }
    for (int i = 0; i < 3; ++i)
      if (edge_distance(i, p) < -tol_) return false;
    return true;
  }

  bool contains(const Box& b) const {
    return contains(Point{b.xmin, b.ymin, 0}) && contains(Point{b.xmax, b.ymin, 0}) &&
           contains(Point{b.xmin, b.ymax, 0}) && contains(Point{b.xmax, b.ymax, 0});
  }

  /// True only when no point of the box lies in the region.
  bool disjoint(const Box& b) const {
    if (b.xmax < bbox_.xmin || b.xmin > bbox_.xmax || b.ymax < bbox_.ymin || b.ymin > bbox_.ymax) return true;
    const std::array<Point, 4> corners = {Point{b.xmin, b.ymin, 0}, Point{b.xmax, b.ymin, 0}, Point{b.xmin, b.ymax, 0},
                                          Point{b.xmax, b.ymax, 0}};
    for (int i = 0; i < 3; ++i) {
      bool outside = true;
      for (const auto& c : corners) {
        const bool out = tol_ == 0.0 ? predicates::orient2d(v_[i], v_[(i + 1) % 3], c) < 0 : edge_distance(i, c) < -tol_;
        outside = outside && out;
      }
      if (outside) return true;
    }
    return false;
  }

 private:
  std::array<Point, 3> v_;
  std::array<double, 3> len_{};
  double tol_ = 0.0;
  Box bbox_;
};

class PartitionTree {
 public:
  static constexpr std::size_t kLeafSize = 16;

  explicit PartitionTree(std::vector<Point> P) : points_(std::move(P)) {
    if (points_.empty()) throw std::invalid_argument("empty point set");
    if (points_.size() >= UINT32_MAX) throw std::invalid_argument("point set too large");
    require_finite(points_);
    require_unique_ids(points_);
    nodes_.reserve(2 * points_.size() / kLeafSize + 1);
    build(0, static_cast<std::uint32_t>(points_.size()), 0);
  }

  const PartitionNode& root() const { return nodes_.front(); }
  const PartitionNode& node(std::size_t i) const { return nodes_[i]; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t size() const { return points_.size(); }
  std::span<const Point> subset(const PartitionNode& n) const { return {points_.data() + n.begin, n.size()}; }
  const std::vector<Point>& points() const { return points_; }

  std::size_t depth() const {
    std::uint32_t d = 0;
    for (const auto& n : nodes_) d = std::max(d, n.depth);
    return d;
  }

  /// Nearest point of P inside the closed triangle (grown by tol) to q, by
  /// (squared distance, id). `visited` accumulates the nodes whose region
  /// crosses the triangle boundary.
  std::optional<NearestHit> f_triangle(const Point& q, const Triangle& tri, double tol = 0.0,
                                       std::size_t* visited = nullptr) const {
    const TriangleRegion region(tri, tol);
    std::optional<NearestHit> best;
    std::size_t count = 0;
    visit(0, q, region, best, count);
    if (visited) *visited += count;
    return best;
  }

 private:
  void build(std::uint32_t begin, std::uint32_t end, std::uint32_t depth) {
    const auto me = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();
    nodes_[me].begin = begin;
    nodes_[me].end = end;
    nodes_[me].depth = depth;
    nodes_[me].region = Box::bounding(std::span<const Point>(points_.data() + begin, end - begin));
    const std::size_t n = end - begin;
    if (n <= kLeafSize) return;

    const auto k = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    const std::size_t strips = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(k))));
    auto class_size = [&](std::size_t c) { return n / k + (c < n % k ? 1 : 0); };

    auto by_x = [](const Point& a, const Point& b) { return std::tie(a.x, a.y, a.id) < std::tie(b.x, b.y, b.id); };
    auto by_y = [](const Point& a, const Point& b) { return std::tie(a.y, a.x, a.id) < std::tie(b.y, b.x, b.id); };
    std::sort(points_.begin() + begin, points_.begin() + end, by_x);

    std::vector<std::pair<std::uint32_t, std::uint32_t>> classes;
    std::uint32_t at = begin;
    for (std::size_t s = 0; s < strips; ++s) {
      const std::size_t c0 = s * k / strips, c1 = (s + 1) * k / strips;
      std::uint32_t strip_end = at;
      for (std::size_t c = c0; c < c1; ++c) strip_end += static_cast<std::uint32_t>(class_size(c));
      std::sort(points_.begin() + at, points_.begin() + strip_end, by_y);
      for (std::size_t c = c0; c < c1; ++c) {
        const auto sz = static_cast<std::uint32_t>(class_size(c));
        classes.emplace_back(at, at + sz);
        at += sz;
      }
    }

    nodes_[me].nn = NearestNeighborIndex(std::span<const Point>(points_.data() + begin, n));
    for (const auto& [b, e] : classes) {
      const auto child = static_cast<std::uint32_t>(nodes_.size());
      nodes_[me].children.push_back(child);
      build(b, e, depth + 1);
    }
  }

  void scan(const PartitionNode& node, const Point& q, const TriangleRegion& region,
            std::optional<NearestHit>& best) const {
    for (const auto& p : subset(node)) {
      if (!region.contains(p)) continue;
      const NearestHit h{p, dist2(p, q)};
      if (!best || hit_less(h, *best)) best = h;
    }
  }

  void visit(std::uint32_t id, const Point& q, const TriangleRegion& region, std::optional<NearestHit>& best,
             std::size_t& count) const {
    const PartitionNode& node = nodes_[id];
    if (region.disjoint(node.region)) return;
    if (region.contains(node.region)) {
      const Point p = node.leaf() ? *nearest_in(node, q) : node.nn.nearest(q);
      const NearestHit h{p, dist2(p, q)};
      if (!best || hit_less(h, *best)) best = h;
      return;
    }
    ++count;
    if (node.leaf()) {
      scan(node, q, region, best);
      return;
    }
    for (const auto c : node.children) visit(c, q, region, best, count);
  }

  std::optional<Point> nearest_in(const PartitionNode& node, const Point& q) const {
    std::optional<NearestHit> best;
    for (const auto& p : subset(node)) {
      const NearestHit h{p, dist2(p, q)};
      if (!best || hit_less(h, *best)) best = h;
    }
    return best->point;
  }

  std::vector<Point> points_;
  std::vector<PartitionNode> nodes_;
};

}  // namespace annmax
