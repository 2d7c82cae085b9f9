#pragma once

// L1 aggregate-max nearest neighbor and top-k on top of DragIndex.
//
// Every cell of the diagram is a union of wedges; each wedge is searched in
// its own frame by at most two dragging subqueries. The point of P nearest to
// the owner inside its cell has g equal to that distance, and the smallest of
// those over all cells is the answer.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "annmax/drag_index.hpp"
#include "annmax/geometry.hpp"
#include "annmax/l1_fvd.hpp"

namespace annmax {

struct AggregateResult {
  Point point;
  double g = 0.0;

  friend bool operator==(const AggregateResult&, const AggregateResult&) = default;
};

/// Instrumentation counters for one query.
struct QueryStats {
  std::size_t q_passes = 0;      // linear passes over Q
  std::size_t cells = 0;         // distinct extremes
  std::size_t subqueries = 0;    // initial dragging subqueries
  std::size_t drag_queries = 0;  // canonical dragging primitives executed
  std::size_t heap_ops = 0;      // pushes and pops on candidate heaps
  std::size_t max_heap = 0;      // largest per-cell candidate heap
  std::size_t nodes_visited = 0;
  std::int64_t time_ns = 0;
};

/// A dragging subquery in one frame: a slab on x' or y', or a quadrant
/// x' >= a, y' >= b; optionally restricted to (x' + y', id) > after.
struct Subquery {
  DragKind kind = DragKind::OutOfCorner;
  int frame = 0;
  TrackAxis axis = TrackAxis::Horizontal;
  Interval slab;
  Side xs;
  Side ys;
  std::optional<DragBound> after;
  double owner_key = 0.0;

  bool contains(const Point& p) const {
    const Point s = frame_symmetry(frame).apply(p);
    bool in;
    if (kind == DragKind::ParallelTrack) {
      const double c = axis == TrackAxis::Vertical ? s.x : s.y;
      in = (slab.lo.open ? c > slab.lo.value : c >= slab.lo.value) && (slab.hi_open ? c < slab.hi : c <= slab.hi);
    } else {
      in = (xs.open ? s.x > xs.value : s.x >= xs.value) && (ys.open ? s.y > ys.value : s.y >= ys.value);
    }
    if (in && after) {
      const double key = s.x + s.y;
      in = key > after->key || (key == after->key && p.id > after->id);
    }
    return in;
  }

  std::optional<DragHit> run(const DragIndex& idx, std::size_t& queries) const {
    if (kind == DragKind::ParallelTrack) {
      ++queries;
      return idx.slab_min(frame, axis, slab, after ? idx.rank_after(frame, after->key, after->id) : -1);
    }
    if (after) return idx.quadrant_min_after(frame, xs, ys, after->key, after->id, &queries);
    ++queries;
    return idx.quadrant_min(frame, xs, ys);
  }
};

namespace detail {

inline Subquery corner_piece(int frame, Side xs, Side ys, double owner_key) {
  Subquery s;
  s.kind = DragKind::OutOfCorner;
  s.frame = frame;
  s.xs = xs;
  s.ys = ys;
  s.owner_key = owner_key;
  return s;
}

inline Subquery track_piece(int frame, TrackAxis axis, Interval slab, std::optional<DragBound> after,
                            double owner_key) {
  Subquery s;
  s.kind = DragKind::ParallelTrack;
  s.frame = frame;
  s.axis = axis;
  s.slab = slab;
  s.after = after;
  s.owner_key = owner_key;
  return s;
}

inline constexpr PointId kMinId = std::numeric_limits<PointId>::min();

}  // namespace detail

/// Dragging subqueries whose regions tile the cell (wedges of a multi-role
/// cell may overlap along shared boundaries). A wedge cut by its diagonal
/// side becomes the corner above the cut plus the horizontal track below it,
/// bounded by the diagonal. Single-role cells always yield both pieces.
inline std::vector<Subquery> decompose_cell(const L1Cell& cell) {
  std::vector<Subquery> out;
  const bool single = cell.wedges.size() == 1;
  for (const auto& w : cell.wedges) {
    const double top = std::max(w.c - w.a, w.b);
    out.push_back(detail::corner_piece(w.frame, Side{w.a, false}, Side{top, false}, w.owner_key));
    if (single || top > w.b) {
      out.push_back(detail::track_piece(w.frame, TrackAxis::Horizontal, Interval{Side{w.b, false}, top, true},
                                        DragBound{w.c, detail::kMinId}, w.owner_key));
    }
  }
  return out;
}

namespace detail {

struct Candidate {
  DragHit hit;
  double dist = 0.0;
  std::size_t piece = 0;
};

struct CandidateAfter {
  bool operator()(const Candidate& a, const Candidate& b) const {
    if (a.dist != b.dist) return a.dist > b.dist;
    return a.hit.point.id > b.hit.point.id;
  }
};

}  // namespace detail

/// Points of P inside one cell in nondecreasing (distance to owner, id),
/// without repeats.
class CellStream {
 public:
  CellStream(const DragIndex& idx, const L1Cell& cell, QueryStats& stats) : idx_(idx), owner_(cell.owner), stats_(stats) {
    for (auto& s : decompose_cell(cell)) {
      ++stats_.subqueries;
      push(std::move(s));
    }
  }

  /// Next point of the cell, or nothing once exhausted.
  std::optional<AggregateResult> next() {
    while (!heap_.empty()) {
      const detail::Candidate top = heap_.top();
      heap_.pop();
      ++stats_.heap_ops;
      refill(top);
      if (emitted_.insert(top.hit.point.id).second) return AggregateResult{top.hit.point, top.dist};
    }
    return std::nullopt;
  }

  /// Smallest pending candidate, if any.
  std::optional<AggregateResult> peek_raw() const {
    if (heap_.empty()) return std::nullopt;
    return AggregateResult{heap_.top().hit.point, heap_.top().dist};
  }

  std::size_t heap_size() const { return heap_.size(); }

 private:
  void push(Subquery s) {
    const auto hit = s.run(idx_, stats_.drag_queries);
    if (!hit) return;
    pieces_.push_back(std::move(s));
    heap_.push({*hit, dist_l1(hit->point, owner_), pieces_.size() - 1});
    ++stats_.heap_ops;
    stats_.max_heap = std::max(stats_.max_heap, heap_.size());
  }

  // Replace the piece that produced c by pieces covering the rest of its
  // region beyond c in (x' + y', id) order.
  void refill(const detail::Candidate& c) {
    const Subquery s = pieces_[c.piece];
    const DragBound past{c.hit.key, c.hit.point.id};
    if (s.kind == DragKind::ParallelTrack) {
      Subquery again = s;
      again.after = past;
      push(std::move(again));
      return;
    }
    const Point h = frame_symmetry(s.frame).apply(c.hit.point);
    push(detail::track_piece(s.frame, TrackAxis::Vertical, Interval{s.xs, h.x, false}, past, s.owner_key));
    push(detail::track_piece(s.frame, TrackAxis::Horizontal, Interval{s.ys, h.y, true}, past, s.owner_key));
    Subquery beyond = detail::corner_piece(s.frame, Side{h.x, true}, Side{h.y, false}, s.owner_key);
    beyond.after = s.after;
    push(std::move(beyond));
  }

  const DragIndex& idx_;
  Point owner_;
  QueryStats& stats_;
  std::vector<Subquery> pieces_;
  std::priority_queue<detail::Candidate, std::vector<detail::Candidate>, detail::CandidateAfter> heap_;
  std::unordered_set<PointId> emitted_;
};

namespace detail {

inline bool result_less(const AggregateResult& a, const AggregateResult& b) {
  if (a.g != b.g) return a.g < b.g;
  return a.point.id < b.point.id;
}

class Timer {
 public:
  explicit Timer(QueryStats* s) : stats_(s), start_(std::chrono::steady_clock::now()) {}
  ~Timer() {
    if (stats_)
      stats_->time_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  QueryStats* stats_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

/// The point of P minimizing g(p, Q) under L1, ties to the smaller id.
inline AggregateResult l1_query(const DragIndex& idx, std::span<const Point> Q, QueryStats* stats = nullptr) {
  QueryStats local;
  QueryStats& st = stats ? *stats : local;
  detail::Timer timer(stats);
  const QueryExtremes e = compute_qmax(Q);
  ++st.q_passes;
  const auto cells = build_cells(e);
  st.cells = cells.size();

  std::optional<AggregateResult> best;
  for (const auto& cell : cells) {
    for (const auto& s : decompose_cell(cell)) {
      ++st.subqueries;
      const auto hit = s.run(idx, st.drag_queries);
      if (!hit) continue;
      const AggregateResult r{hit->point, dist_l1(hit->point, cell.owner)};
      if (!best || detail::result_less(r, *best)) best = r;
    }
  }
  if (!best) throw std::logic_error("cells do not cover the point set");
  best->g = g_value(best->point, e, Metric::L1);
  return *best;
}

/// The k points of P with smallest g(p, Q) under L1, ascending by (g, id).
/// Returns all of P when k exceeds its size.
inline std::vector<AggregateResult> l1_top_k(const DragIndex& idx, std::span<const Point> Q, std::size_t k,
                                             QueryStats* stats = nullptr) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  QueryStats local;
  QueryStats& st = stats ? *stats : local;
  detail::Timer timer(stats);
  const QueryExtremes e = compute_qmax(Q);
  ++st.q_passes;
  const auto cells = build_cells(e);
  st.cells = cells.size();
  k = std::min(k, idx.size());

  std::vector<CellStream> streams;
  streams.reserve(cells.size());
  for (const auto& c : cells) streams.emplace_back(idx, c, st);

  struct Head {
    AggregateResult r;
    std::size_t stream;
  };
  auto after = [](const Head& a, const Head& b) { return detail::result_less(b.r, a.r); };
  std::priority_queue<Head, std::vector<Head>, decltype(after)> merge(after);
  for (std::size_t i = 0; i < streams.size(); ++i)
    if (auto r = streams[i].next()) merge.push({*r, i});

  std::vector<AggregateResult> out;
  std::unordered_set<PointId> seen;
  while (out.size() < k && !merge.empty()) {
    const Head h = merge.top();
    merge.pop();
    if (seen.insert(h.r.point.id).second) out.push_back({h.r.point, g_value(h.r.point, e, Metric::L1)});
    if (auto r = streams[h.stream].next()) merge.push({*r, h.stream});
  }
  return out;
}

}  // namespace annmax
