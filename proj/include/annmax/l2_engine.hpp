#pragma once

// Euclidean aggregate-max nearest neighbour.
//
// For each hull vertex q of Q, f(q) is the point of P nearest to q inside
// q's farthest-Voronoi cell, found triangle by triangle. Inside that cell
// g(p) = d(p, q), so the f(q) closest to its q is the answer.

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "annmax/farthest_voronoi.hpp"
#include "annmax/geometry.hpp"
#include "annmax/l1_engine.hpp"
#include "annmax/partition_tree.hpp"

namespace annmax {

class L2Index {
 public:
  /// Cell triangles are grown by this fraction of the clip-box diagonal, so
  /// points on a shared cell boundary are not lost to rounding in the
  /// computed triangle vertices.
  static constexpr double kRelativeTolerance = 1e-13;

  explicit L2Index(std::vector<Point> P) : tree_(std::move(P)), box_(clip_box_for(tree_.points())) {}

  const PartitionTree& tree() const { return tree_; }
  const Box& clip_box() const { return box_; }
  double tolerance() const { return kRelativeTolerance * box_.diagonal(); }

 private:
  PartitionTree tree_;
  Box box_;
};

/// Per-query diagnostics beyond QueryStats.
struct L2Trace {
  std::size_t hull_size = 0;
  std::size_t triangles = 0;
  /// Queries where selection by distance to the owner disagreed with the exact g and
  /// the answer was re-selected by exact g.
  std::size_t reselections = 0;
};

inline AggregateResult l2_query(const L2Index& idx, std::span<const Point> Q, QueryStats* stats = nullptr,
                                L2Trace* trace = nullptr) {
  QueryStats local;
  QueryStats& st = stats ? *stats : local;
  detail::Timer timer(stats);
  const FarthestDiagram d = farthest_vd(Q);
  ++st.q_passes;
  st.cells = d.cells.size();

  struct Candidate {
    NearestHit hit;  // f(q) and its squared distance to q
    double g2;       // exact squared aggregate value of f(q)
  };
  std::vector<Candidate> cands;
  std::size_t triangles = 0;
  for (const auto& cell : d.cells) {
    std::optional<NearestHit> f;
    for (const auto& tri : triangulate_cell(cell, idx.clip_box()).triangles) {
      ++triangles;
      const auto h = idx.tree().f_triangle(cell.owner, tri, idx.tolerance(), &st.nodes_visited);
      if (h && (!f || hit_less(*h, *f))) f = h;
    }
    if (!f) continue;
    double g2 = 0;
    for (const auto& q : d.hull) g2 = std::max(g2, dist2(f->point, q));
    cands.push_back({*f, g2});
  }
  if (cands.empty()) throw std::logic_error("cells do not cover the point set");

  const Candidate* pick = &cands.front();
  for (const auto& c : cands)
    if (hit_less(c.hit, pick->hit)) pick = &c;
  std::size_t reselected = 0;
  if (pick->g2 != pick->hit.d2) {
    ++reselected;
    for (const auto& c : cands)
      if (c.g2 < pick->g2 || (c.g2 == pick->g2 && c.hit.point.id < pick->hit.point.id)) pick = &c;
  }
  if (trace) {
    trace->hull_size = d.hull.size();
    trace->triangles = triangles;
    trace->reselections = reselected;
  }
  return {pick->hit.point, std::sqrt(pick->g2)};
}

}  // namespace annmax
