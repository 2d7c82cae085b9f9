#pragma once

// Delaunay triangulation (incremental Bowyer-Watson with ghost triangles)
// and a nearest-neighbour index built on a hierarchy of triangulations.
//
// Nearest-neighbour search walks the Delaunay graph greedily: a vertex with
// no strictly closer neighbour is a nearest vertex, and all vertices at the
// same distance are connected through each other, so ties are settled by a
// flood over equal-distance neighbours.

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "annmax/geometry.hpp"
#include "annmax/predicates.hpp"

namespace annmax {

namespace detail {

// Position along a Hilbert curve on a 2^16 grid.
inline std::uint64_t hilbert_index(std::uint32_t x, std::uint32_t y) {
  std::uint64_t d = 0;
  for (std::uint32_t s = 1u << 15; s > 0; s >>= 1) {
    const std::uint32_t rx = (x & s) ? 1 : 0;
    const std::uint32_t ry = (y & s) ? 1 : 0;
    d += static_cast<std::uint64_t>(s) * s * ((3 * rx) ^ ry);
    if (ry == 0) {
      if (rx == 1) {
        x = s - 1 - x;
        y = s - 1 - y;
      }
      std::swap(x, y);
    }
  }
  return d;
}

inline std::vector<std::uint32_t> hilbert_order(std::span<const Point> pts) {
  const Box b = Box::bounding(pts);
  const double sx = b.width() > 0 ? 65535.0 / b.width() : 0.0;
  const double sy = b.height() > 0 ? 65535.0 / b.height() : 0.0;
  std::vector<std::uint64_t> key(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    key[i] = hilbert_index(static_cast<std::uint32_t>((pts[i].x - b.xmin) * sx),
                           static_cast<std::uint32_t>((pts[i].y - b.ymin) * sy));
  std::vector<std::uint32_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t c) { return key[a] < key[c]; });
  return order;
}

}  // namespace detail

/// Delaunay triangulation of points with pairwise distinct coordinates.
/// Collinear input degenerates to the path through the sorted points.
class DelaunayTriangulation {
 public:
  DelaunayTriangulation() = default;

  explicit DelaunayTriangulation(std::vector<Point> pts) : verts_(std::move(pts)) {
    if (verts_.empty()) throw std::invalid_argument("empty point set");
    build();
  }

  const std::vector<Point>& vertices() const { return verts_; }
  std::size_t size() const { return verts_.size(); }
  bool collinear() const { return collinear_; }

  std::span<const std::uint32_t> neighbors(std::uint32_t v) const {
    return {adj_.data() + adj_start_[v], adj_.data() + adj_start_[v + 1]};
  }

  /// Finite triangles, counterclockwise.
  std::vector<std::array<std::uint32_t, 3>> triangles() const {
    std::vector<std::array<std::uint32_t, 3>> out;
    for (const auto& t : tris_)
      if (t.alive && !is_ghost(t))
        out.push_back({static_cast<std::uint32_t>(t.v[0]), static_cast<std::uint32_t>(t.v[1]),
                       static_cast<std::uint32_t>(t.v[2])});
    return out;
  }

  /// Greedy descent from `start` to a vertex with no strictly closer neighbour.
  std::uint32_t descend(const Point& q, std::uint32_t start) const {
    std::uint32_t cur = start;
    double dcur = dist2(q, verts_[cur]);
    for (;;) {
      std::uint32_t best = cur;
      for (const auto n : neighbors(cur)) {
        const double d = dist2(q, verts_[n]);
        if (d < dcur) {
          dcur = d;
          best = n;
        }
      }
      if (best == cur) return cur;
      cur = best;
    }
  }

  /// Nearest vertex to q by (squared distance, id).
  std::uint32_t nearest_from(const Point& q, std::uint32_t start) const {
    const std::uint32_t v = descend(q, start);
    const double d = dist2(q, verts_[v]);
    std::uint32_t best = v;
    std::vector<std::uint32_t> stack{v}, seen{v};
    while (!stack.empty()) {
      const std::uint32_t u = stack.back();
      stack.pop_back();
      for (const auto n : neighbors(u)) {
        if (dist2(q, verts_[n]) != d || std::find(seen.begin(), seen.end(), n) != seen.end()) continue;
        seen.push_back(n);
        stack.push_back(n);
        if (verts_[n].id < verts_[best].id) best = n;
      }
    }
    return best;
  }

 private:
  static constexpr std::int32_t kInf = -1;

  struct Tri {
    std::array<std::int32_t, 3> v{};
    std::array<std::int32_t, 3> n{};
    bool alive = true;
  };

  struct Edge {
    std::int32_t a, b;  // boundary edge, counterclockwise as seen from the cavity
    std::int32_t out;   // triangle across the edge
  };

  static int inf_slot(const Tri& t) {
    for (int i = 0; i < 3; ++i)
      if (t.v[i] == kInf) return i;
    return -1;
  }
  static bool is_ghost(const Tri& t) { return inf_slot(t) >= 0; }

  void build() {
    const auto order = detail::hilbert_order(verts_);
    std::size_t i0 = order[0], i1 = order[1 % order.size()], i2 = 0;
    bool found = false;
    if (verts_.size() >= 3) {
      for (std::size_t k = 2; k < order.size(); ++k) {
        if (predicates::orient2d(verts_[i0], verts_[i1], verts_[order[k]]) != 0) {
          i2 = order[k];
          found = true;
          break;
        }
      }
    }
    if (!found) {
      build_path();
      return;
    }
    if (predicates::orient2d(verts_[i0], verts_[i1], verts_[i2]) < 0) std::swap(i1, i2);
    const auto a = static_cast<std::int32_t>(i0), b = static_cast<std::int32_t>(i1), c = static_cast<std::int32_t>(i2);
    // Finite triangle 0 and the ghosts across its edges bc, ca, ab.
    tris_.push_back({{a, b, c}, {1, 2, 3}, true});
    tris_.push_back({{c, b, kInf}, {3, 2, 0}, true});
    tris_.push_back({{a, c, kInf}, {1, 3, 0}, true});
    tris_.push_back({{b, a, kInf}, {2, 1, 0}, true});
    mark_.assign(4, 0);
    last_ = 0;
    for (const auto i : order)
      if (i != i0 && i != i1 && i != i2) insert(static_cast<std::int32_t>(i));
    build_adjacency();
  }

  void build_path() {
    collinear_ = true;
    std::vector<std::uint32_t> sorted(verts_.size());
    std::iota(sorted.begin(), sorted.end(), 0u);
    std::sort(sorted.begin(), sorted.end(), [&](std::uint32_t a, std::uint32_t b) {
      return std::make_pair(verts_[a].x, verts_[a].y) < std::make_pair(verts_[b].x, verts_[b].y);
    });
    std::vector<std::vector<std::uint32_t>> nb(verts_.size());
    for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
      nb[sorted[k]].push_back(sorted[k + 1]);
      nb[sorted[k + 1]].push_back(sorted[k]);
    }
    flatten(nb);
  }

  void flatten(const std::vector<std::vector<std::uint32_t>>& nb) {
    adj_start_.assign(nb.size() + 1, 0);
    for (std::size_t v = 0; v < nb.size(); ++v) adj_start_[v + 1] = adj_start_[v] + nb[v].size();
    adj_.clear();
    adj_.reserve(adj_start_.back());
    for (const auto& l : nb) adj_.insert(adj_.end(), l.begin(), l.end());
  }

  void build_adjacency() {
    std::vector<std::uint32_t> degree(verts_.size() + 1, 0);
    auto each_edge = [&](auto&& f) {
      for (const auto& t : tris_) {
        if (!t.alive) continue;
        for (int i = 0; i < 3; ++i) {
          const std::int32_t a = t.v[(i + 1) % 3], b = t.v[(i + 2) % 3];
          if (a != kInf && b != kInf && a < b) f(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b));
        }
      }
    };
    each_edge([&](std::uint32_t a, std::uint32_t b) {
      ++degree[a];
      ++degree[b];
    });
    adj_start_.assign(verts_.size() + 1, 0);
    for (std::size_t v = 0; v < verts_.size(); ++v) adj_start_[v + 1] = adj_start_[v] + degree[v];
    adj_.assign(adj_start_.back(), 0);
    std::vector<std::size_t> fill(adj_start_.begin(), adj_start_.end() - 1);
    each_edge([&](std::uint32_t a, std::uint32_t b) {
      adj_[fill[a]++] = b;
      adj_[fill[b]++] = a;
    });
  }

  bool in_conflict(const Tri& t, const Point& p) const {
    const int g = inf_slot(t);
    if (g < 0) return predicates::incircle(verts_[t.v[0]], verts_[t.v[1]], verts_[t.v[2]], p) > 0;
    const Point& a = verts_[t.v[(g + 1) % 3]];
    const Point& b = verts_[t.v[(g + 2) % 3]];
    const int o = predicates::orient2d(a, b, p);
    if (o != 0) return o > 0;
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
  }

  std::int32_t locate(const Point& p, std::int32_t t) const {
    if (const int g = inf_slot(tris_[t]); g >= 0) t = tris_[t].n[g];
    for (std::uint32_t step = 0;; ++step) {
      const Tri& tr = tris_[t];
      bool moved = false;
      for (int k = 0; k < 3; ++k) {
        const int i = static_cast<int>((k + step) % 3);
        const Point& a = verts_[tr.v[(i + 1) % 3]];
        const Point& b = verts_[tr.v[(i + 2) % 3]];
        if (predicates::orient2d(a, b, p) < 0) {
          t = tr.n[i];
          moved = true;
          break;
        }
      }
      if (!moved || is_ghost(tris_[t])) return t;
    }
  }

  std::int32_t new_tri() {
    if (!free_.empty()) {
      const std::int32_t t = free_.back();
      free_.pop_back();
      tris_[t].alive = true;
      return t;
    }
    tris_.push_back({});
    mark_.push_back(0);
    return static_cast<std::int32_t>(tris_.size() - 1);
  }

  void insert(std::int32_t pi) {
    const Point& p = verts_[pi];
    const std::int32_t start = locate(p, last_);
    ++stamp_;
    cavity_.assign(1, start);
    mark_[start] = stamp_;
    boundary_.clear();
    for (std::size_t k = 0; k < cavity_.size(); ++k) {
      const std::int32_t t = cavity_[k];
      for (int i = 0; i < 3; ++i) {
        const std::int32_t nb = tris_[t].n[i];
        if (mark_[nb] == stamp_) continue;
        if (in_conflict(tris_[nb], p)) {
          mark_[nb] = stamp_;
          cavity_.push_back(nb);
        } else {
          boundary_.push_back({tris_[t].v[(i + 1) % 3], tris_[t].v[(i + 2) % 3], nb});
        }
      }
    }
    for (const auto t : cavity_) {
      tris_[t].alive = false;
      free_.push_back(t);
    }
    created_.clear();
    for (const auto& e : boundary_) {
      const std::int32_t nt = new_tri();
      tris_[nt].v = {e.a, e.b, pi};
      tris_[nt].n[2] = e.out;
      Tri& out = tris_[e.out];
      for (int k = 0; k < 3; ++k)
        if (out.v[k] != e.a && out.v[k] != e.b) out.n[k] = nt;
      created_.push_back(nt);
    }
    // Around p the new triangles share the edges (b, p) and (p, a).
    for (const auto nt : created_) {
      Tri& t = tris_[nt];
      for (const auto ot : created_) {
        if (tris_[ot].v[0] == t.v[1]) t.n[0] = ot;
        if (tris_[ot].v[1] == t.v[0]) t.n[1] = ot;
      }
      if (!is_ghost(t)) last_ = nt;
    }
  }

  std::vector<Point> verts_;
  bool collinear_ = false;
  std::vector<Tri> tris_;
  std::vector<std::uint32_t> mark_;
  std::uint32_t stamp_ = 0;
  std::vector<std::int32_t> free_;
  std::int32_t last_ = 0;
  std::vector<std::int32_t> cavity_;
  std::vector<Edge> boundary_;
  std::vector<std::int32_t> created_;
  std::vector<std::size_t> adj_start_;
  std::vector<std::uint32_t> adj_;
};

/// Nearest neighbour over a static point set: a stack of Delaunay
/// triangulations of ever sparser random samples, each level's answer
/// seeding the greedy walk one level down.
class NearestNeighborIndex {
 public:
  NearestNeighborIndex() = default;

  explicit NearestNeighborIndex(std::span<const Point> pts) {
    if (pts.empty()) throw std::invalid_argument("empty point set");
    std::vector<Point> base(pts.begin(), pts.end());
    std::sort(base.begin(), base.end(), [](const Point& a, const Point& b) {
      if (a.x != b.x) return a.x < b.x;
      if (a.y != b.y) return a.y < b.y;
      return a.id < b.id;
    });
    base.erase(std::unique(base.begin(), base.end(), [](const Point& a, const Point& b) { return same_location(a, b); }),
               base.end());
    if (base.size() <= kTop) {
      small_ = std::move(base);
      return;
    }
    levels_.emplace_back(std::move(base));
    std::mt19937_64 rng(0x5eed);
    while (levels_.back().size() > kTop) {
      const auto& below = levels_.back().vertices();
      std::vector<Point> sample;
      std::vector<std::uint32_t> down;
      for (std::uint32_t i = 0; i < below.size(); ++i) {
        if (rng() % kRatio == 0) {
          sample.push_back(below[i]);
          down.push_back(i);
        }
      }
      if (sample.empty()) break;
      levels_.emplace_back(std::move(sample));
      down_.push_back(std::move(down));
    }
  }

  std::size_t size() const { return levels_.empty() ? small_.size() : levels_.front().size(); }

  /// Nearest point by (squared distance, id).
  Point nearest(const Point& q) const {
    if (levels_.empty()) {
      const Point* best = &small_.front();
      for (const auto& p : small_) {
        const double d = dist2(q, p), bd = dist2(q, *best);
        if (d < bd || (d == bd && p.id < best->id)) best = &p;
      }
      return *best;
    }
    const auto& top = levels_.back().vertices();
    std::uint32_t cur = 0;
    for (std::uint32_t i = 1; i < top.size(); ++i)
      if (dist2(q, top[i]) < dist2(q, top[cur])) cur = i;
    for (std::size_t level = levels_.size() - 1; level > 0; --level) {
      cur = down_[level - 1][cur];
      cur = levels_[level - 1].descend(q, cur);
    }
    return levels_.front().vertices()[levels_.front().nearest_from(q, cur)];
  }

 private:
  static constexpr std::size_t kTop = 32;
  static constexpr std::uint64_t kRatio = 30;

  std::vector<Point> small_;  // up to kTop points, scanned directly
  std::vector<DelaunayTriangulation> levels_;
  std::vector<std::vector<std::uint32_t>> down_;  // down_[k][i]: level k+1 vertex i in level k
};

}  // namespace annmax
