#pragma once

// Brute-force reference answers, quadratic or linear scans only.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "annmax/drag_index.hpp"
#include "annmax/geometry.hpp"
#include "annmax/l1_engine.hpp"

namespace annmax::oracle {

/// max over Q of d(p, q). Under L2 this is the square root of the largest
/// squared distance, so comparisons can be made on g_squared instead.
inline double g_brute(const Point& p, std::span<const Point> Q, Metric m) {
  double g = 0.0;
  for (const auto& q : Q) g = std::max(g, m == Metric::L1 ? dist_l1(p, q) : dist2(p, q));
  return m == Metric::L1 ? g : std::sqrt(g);
}

inline double g_squared(const Point& p, std::span<const Point> Q) {
  double g = 0.0;
  for (const auto& q : Q) g = std::max(g, dist2(p, q));
  return g;
}

namespace detail {

// The comparison key: the L1 value, or the squared L2 value.
inline double rank_value(const Point& p, std::span<const Point> Q, Metric m) {
  return m == Metric::L1 ? g_brute(p, Q, m) : g_squared(p, Q);
}

}  // namespace detail

inline AggregateResult brute_query(std::span<const Point> P, std::span<const Point> Q, Metric m) {
  if (P.empty()) throw std::invalid_argument("empty point set");
  if (Q.empty()) throw std::invalid_argument("empty query set");
  const Point* best = nullptr;
  double best_v = 0.0;
  for (const auto& p : P) {
    const double v = detail::rank_value(p, Q, m);
    if (!best || v < best_v || (v == best_v && p.id < best->id)) {
      best = &p;
      best_v = v;
    }
  }
  return {*best, m == Metric::L1 ? best_v : std::sqrt(best_v)};
}

/// All of P sorted by (g, id), truncated to k.
inline std::vector<AggregateResult> brute_top_k(std::span<const Point> P, std::span<const Point> Q, std::size_t k,
                                                Metric m) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (Q.empty()) throw std::invalid_argument("empty query set");
  struct Row {
    double v;
    Point p;
  };
  std::vector<Row> rows;
  rows.reserve(P.size());
  for (const auto& p : P) rows.push_back({detail::rank_value(p, Q, m), p});
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return a.v != b.v ? a.v < b.v : a.p.id < b.p.id;
  });
  std::vector<AggregateResult> out;
  for (std::size_t i = 0; i < std::min(k, rows.size()); ++i)
    out.push_back({rows[i].p, m == Metric::L1 ? rows[i].v : std::sqrt(rows[i].v)});
  return out;
}

/// First point hit by a dragging query: minimum (key, id) over the region,
/// above the bound when one is given.
inline std::optional<DragHit> brute_drag(std::span<const Point> P, const DragQuery& q) {
  q.validate();
  std::optional<DragHit> best;
  for (const auto& p : P) {
    if (!q.region_contains(p)) continue;
    const double key = q.key_of(p);
    if (q.after && !(key > q.after->key || (key == q.after->key && p.id > q.after->id))) continue;
    if (!best || key < best->key || (key == best->key && p.id < best->point.id)) best = DragHit{p, key};
  }
  return best;
}

/// Every point of the region in dragging order.
inline std::vector<DragHit> brute_drag_all(std::span<const Point> P, const DragQuery& q) {
  q.validate();
  std::vector<DragHit> out;
  for (const auto& p : P)
    if (q.region_contains(p)) out.push_back({p, q.key_of(p)});
  std::sort(out.begin(), out.end(), [](const DragHit& a, const DragHit& b) {
    return a.key != b.key ? a.key < b.key : a.point.id < b.point.id;
  });
  return out;
}

/// Nearest point of the subset to q by (squared distance, id).
inline std::optional<Point> brute_nearest(std::span<const Point> P, const Point& q) {
  std::optional<Point> best;
  double bd = 0.0;
  for (const auto& p : P) {
    const double d = dist2(p, q);
    if (!best || d < bd || (d == bd && p.id < best->id)) {
      best = p;
      bd = d;
    }
  }
  return best;
}

}  // namespace annmax::oracle
