#pragma once

// Segment-dragging queries over a static point set.
//
// A segment of slope -1 sweeps the lines x + y = t, a segment of slope +1 the
// lines x - y = t, so every dragging query asks for the point minimizing one
// of the four keys x + y, -(x + y), x - y, -(x - y) over a region. Each key is
// turned into x' + y' by one of four reflections (a "frame"); within a frame
// the two query regions become
//
//   parallel track: a closed/open slab on x' or on y';
//   out of corner:  a north-east quadrant x' >= a, y' >= b.
//
// Ties on the key are broken by smaller id, so every query has a unique
// answer and "next hit" queries take an exclusive (key, id) bound.

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "annmax/geometry.hpp"

namespace annmax {

enum class TrackAxis { Horizontal, Vertical };  // lines y = offset / x = offset
enum class Quadrant { NE, NW, SW, SE };
enum class DragKind { ParallelTrack, OutOfCorner };
enum class DragDirection { Increasing, Decreasing };

struct Track {
  TrackAxis axis = TrackAxis::Horizontal;
  double offset = 0.0;
  bool closed = true;
};

/// Exclusive lower bound on (dragged key, id).
struct DragBound {
  double key = 0.0;
  PointId id = 0;
};

/// A segment-dragging query in world coordinates. The dragged key is x + y
/// for slope -1 and x - y for slope +1, negated when dragging decreases it.
struct DragQuery {
  DragKind kind = DragKind::ParallelTrack;
  std::array<Track, 2> tracks{};  // parallel track: lower and upper track
  Point corner;                   // out of corner
  Quadrant quadrant = Quadrant::NE;
  bool corner_x_closed = true;
  bool corner_y_closed = true;
  int slope = -1;
  DragDirection direction = DragDirection::Increasing;
  std::optional<DragBound> after;

  static DragQuery parallel(Track lo, Track hi, int slope, DragDirection dir) {
    DragQuery q;
    q.kind = DragKind::ParallelTrack;
    q.tracks = {lo, hi};
    q.slope = slope;
    q.direction = dir;
    return q;
  }

  /// Slope and direction follow from the quadrant.
  static DragQuery out_of(Point corner, Quadrant quad) {
    DragQuery q;
    q.kind = DragKind::OutOfCorner;
    q.corner = corner;
    q.quadrant = quad;
    q.slope = (quad == Quadrant::NE || quad == Quadrant::SW) ? -1 : 1;
    q.direction = (quad == Quadrant::NE || quad == Quadrant::SE) ? DragDirection::Increasing : DragDirection::Decreasing;
    return q;
  }

  /// The minimized key of p.
  double key_of(const Point& p) const {
    const double k = slope < 0 ? p.x + p.y : p.x - p.y;
    return direction == DragDirection::Increasing ? k : -k;
  }

  /// Frame whose reflection maps the key to x' + y'.
  int frame() const {
    if (slope < 0) return direction == DragDirection::Increasing ? 0 : 3;
    return direction == DragDirection::Increasing ? 2 : 1;
  }

  /// Region membership (ignores the bound).
  bool region_contains(const Point& p) const {
    if (kind == DragKind::ParallelTrack) {
      const double c = tracks[0].axis == TrackAxis::Horizontal ? p.y : p.x;
      const bool lo_ok = tracks[0].closed ? c >= tracks[0].offset : c > tracks[0].offset;
      const bool hi_ok = tracks[1].closed ? c <= tracks[1].offset : c < tracks[1].offset;
      return lo_ok && hi_ok;
    }
    const bool east = quadrant == Quadrant::NE || quadrant == Quadrant::SE;
    const bool north = quadrant == Quadrant::NE || quadrant == Quadrant::NW;
    const double dx = east ? p.x - corner.x : corner.x - p.x;
    const double dy = north ? p.y - corner.y : corner.y - p.y;
    return (corner_x_closed ? dx >= 0 : dx > 0) && (corner_y_closed ? dy >= 0 : dy > 0);
  }

  void validate() const {
    if (slope != 1 && slope != -1) throw std::invalid_argument("dragged segment must have slope +1 or -1");
    if (kind == DragKind::ParallelTrack) {
      if (tracks[0].axis != tracks[1].axis) throw std::invalid_argument("malformed tracks: not parallel");
      if (!(tracks[0].offset <= tracks[1].offset)) throw std::invalid_argument("malformed tracks: lower above upper");
    } else {
      const int want_slope = (quadrant == Quadrant::NE || quadrant == Quadrant::SW) ? -1 : 1;
      const auto want_dir = (quadrant == Quadrant::NE || quadrant == Quadrant::SE) ? DragDirection::Increasing
                                                                                  : DragDirection::Decreasing;
      if (slope != want_slope || direction != want_dir)
        throw std::invalid_argument("inconsistent quadrant and slope");
    }
  }
};

struct DragHit {
  Point point;
  double key = 0.0;  // the dragged coordinate at the hit ("drag distance")

  friend bool operator==(const DragHit&, const DragHit&) = default;
};

/// One side of a canonical region: coordinate >= value, or > value when open.
struct Side {
  double value = -std::numeric_limits<double>::infinity();
  bool open = false;
};

/// Canonical slab lo <= c <= hi with per-end openness.
struct Interval {
  Side lo;
  double hi = std::numeric_limits<double>::infinity();
  bool hi_open = false;
};

namespace detail {

using Rank = std::int64_t;  // -1 means "no bound"
inline constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

/// Levels of a bottom-up merge sort stored in one array; blocks of width
/// below 2^kBlockLevel are not stored and are scanned from level 0 instead.
inline constexpr std::size_t kBlockLevel = 3;

inline std::size_t level_count(std::size_t n) {
  std::size_t levels = 1;
  while ((std::size_t{1} << (levels - 1)) < n) ++levels;
  return levels;
}

/// Merge-sort tree over a sequence of distinct ranks: successor of a rank
/// threshold within a position range, O(log^2 n).
class SuccessorTree {
 public:
  SuccessorTree() = default;
  explicit SuccessorTree(std::vector<std::uint32_t> values) : n_(values.size()), top_(level_count(n_) - 1) {
    data_.resize(stored_levels() * n_);
    std::copy(values.begin(), values.end(), data_.begin());
    std::vector<std::uint32_t> cur = std::move(values), next(n_);
    for (std::size_t level = 1; level <= top_; ++level) {
      const std::size_t half = std::size_t{1} << (level - 1);
      for (std::size_t start = 0; start < n_; start += 2 * half) {
        const std::size_t mid = std::min(start + half, n_), end = std::min(start + 2 * half, n_);
        std::merge(cur.begin() + start, cur.begin() + mid, cur.begin() + mid, cur.begin() + end, next.begin() + start);
      }
      std::swap(cur, next);
      if (level >= kBlockLevel) std::copy(cur.begin(), cur.end(), row(level));
    }
  }

  /// Smallest value > after among positions [l, r), or kNone.
  std::uint32_t successor(std::size_t l, std::size_t r, Rank after) const {
    if (l >= r) return kNone;
    return visit(top_, 0, l, std::min(r, n_), after);
  }

 private:
  std::size_t stored_levels() const { return 1 + (top_ >= kBlockLevel ? top_ - kBlockLevel + 1 : 0); }
  std::uint32_t* row(std::size_t level) { return data_.data() + (level == 0 ? 0 : level - kBlockLevel + 1) * n_; }
  const std::uint32_t* row(std::size_t level) const {
    return data_.data() + (level == 0 ? 0 : level - kBlockLevel + 1) * n_;
  }

  std::uint32_t visit(std::size_t level, std::size_t node, std::size_t l, std::size_t r, Rank after) const {
    const std::size_t width = std::size_t{1} << level;
    const std::size_t lo = node * width, hi = std::min(lo + width, n_);
    if (lo >= n_ || hi <= l || r <= lo) return kNone;
    if (level < kBlockLevel || (level == kBlockLevel && !(l <= lo && hi <= r))) {
      std::uint32_t best = kNone;
      const std::uint32_t* base = row(0);
      for (std::size_t i = std::max(l, lo); i < std::min(r, hi); ++i)
        if (static_cast<Rank>(base[i]) > after) best = std::min(best, base[i]);
      return best;
    }
    if (l <= lo && hi <= r) {
      const std::uint32_t* lv = row(level);
      const auto it = std::upper_bound(lv + lo, lv + hi, after, [](Rank a, std::uint32_t v) { return a < static_cast<Rank>(v); });
      return it == lv + hi ? kNone : *it;
    }
    return std::min(visit(level - 1, 2 * node, l, r, after), visit(level - 1, 2 * node + 1, l, r, after));
  }

  std::size_t n_ = 0;
  std::size_t top_ = 0;
  std::vector<std::uint32_t> data_;
};

/// Range tree over x-order: positions [l, n) with y-rank >= t, minimizing a
/// value, O(log^2 n). Each stored node keeps its entries sorted by y-rank plus
/// suffix minima of the value.
class DominanceTree {
 public:
  DominanceTree() = default;
  DominanceTree(std::span<const std::uint32_t> yrank, std::span<const std::uint32_t> value)
      : n_(yrank.size()), top_(level_count(n_) - 1), base_(n_) {
    for (std::size_t i = 0; i < n_; ++i) base_[i] = {yrank[i], value[i]};
    const std::size_t stored = top_ >= kBlockLevel ? top_ - kBlockLevel + 1 : 0;
    yranks_.resize(stored * n_);
    sufmin_.resize(stored * n_);
    std::vector<Entry> cur = base_, next(n_);
    for (std::size_t level = 1; level <= top_; ++level) {
      const std::size_t half = std::size_t{1} << (level - 1);
      for (std::size_t start = 0; start < n_; start += 2 * half) {
        const std::size_t mid = std::min(start + half, n_), end = std::min(start + 2 * half, n_);
        std::merge(cur.begin() + start, cur.begin() + mid, cur.begin() + mid, cur.begin() + end, next.begin() + start,
                   [](const Entry& a, const Entry& b) { return a.yrank < b.yrank; });
      }
      std::swap(cur, next);
      if (level >= kBlockLevel) store(level, cur);
    }
  }

  /// Minimum value among positions >= l whose y-rank >= t, or kNone.
  std::uint32_t query(std::size_t l, std::uint32_t t) const {
    if (l >= n_) return kNone;
    return visit(top_, 0, l, t);
  }

 private:
  struct Entry {
    std::uint32_t yrank;
    std::uint32_t value;
  };

  std::size_t offset(std::size_t level) const { return (level - kBlockLevel) * n_; }

  void store(std::size_t level, const std::vector<Entry>& entries) {
    const std::size_t width = std::size_t{1} << level, off = offset(level);
    for (std::size_t start = 0; start < n_; start += width) {
      const std::size_t end = std::min(start + width, n_);
      std::uint32_t best = kNone;
      for (std::size_t i = end; i-- > start;) {
        yranks_[off + i] = entries[i].yrank;
        best = std::min(best, entries[i].value);
        sufmin_[off + i] = best;
      }
    }
  }

  std::uint32_t visit(std::size_t level, std::size_t node, std::size_t l, std::uint32_t t) const {
    const std::size_t width = std::size_t{1} << level;
    const std::size_t lo = node * width, hi = std::min(lo + width, n_);
    if (lo >= n_ || hi <= l) return kNone;
    if (level < kBlockLevel || (level == kBlockLevel && l > lo)) {
      std::uint32_t best = kNone;
      for (std::size_t i = std::max(l, lo); i < hi; ++i)
        if (base_[i].yrank >= t) best = std::min(best, base_[i].value);
      return best;
    }
    if (l <= lo) {
      const std::uint32_t* yr = yranks_.data() + offset(level);
      const auto it = std::lower_bound(yr + lo, yr + hi, t);
      return it == yr + hi ? kNone : sufmin_[offset(level) + (it - yr)];
    }
    return std::min(visit(level - 1, 2 * node, l, t), visit(level - 1, 2 * node + 1, l, t));
  }

  std::size_t n_ = 0;
  std::size_t top_ = 0;
  std::vector<Entry> base_;
  std::vector<std::uint32_t> yranks_;
  std::vector<std::uint32_t> sufmin_;
};

}  // namespace detail

/// Dragging structures over P in the four reflected frames.
class DragIndex {
 public:
  explicit DragIndex(std::vector<Point> points) : points_(std::move(points)) {
    if (points_.empty()) throw std::invalid_argument("empty point set");
    if (points_.size() >= detail::kNone) throw std::invalid_argument("point set too large");
    require_finite(points_);
    require_unique_ids(points_);
    const BaseOrders base = base_orders();
    for (int f = 0; f < 4; ++f) build_frame(f, base);
  }

  std::size_t size() const { return points_.size(); }
  const std::vector<Point>& points() const { return points_; }

  // -- canonical-frame primitives -------------------------------------------

  /// Point minimizing (x'+y', id) above `after` among points whose x' (or y')
  /// lies in the interval.
  std::optional<DragHit> slab_min(int frame, TrackAxis axis, const Interval& iv, detail::Rank after) const {
    const Frame& fr = frames_[frame];
    const auto& coords = axis == TrackAxis::Vertical ? fr.xs : fr.ys;
    const std::size_t l = lower_index(coords, iv.lo);
    const std::size_t r = iv.hi_open ? std::lower_bound(coords.begin(), coords.end(), iv.hi) - coords.begin()
                                     : std::upper_bound(coords.begin(), coords.end(), iv.hi) - coords.begin();
    const auto& tree = axis == TrackAxis::Vertical ? fr.slab_x : fr.slab_y;
    return hit(fr, tree.successor(l, r, after));
  }

  /// Point minimizing (x'+y', id) in the quadrant x' >= a, y' >= b.
  std::optional<DragHit> quadrant_min(int frame, const Side& xs, const Side& ys) const {
    const Frame& fr = frames_[frame];
    const std::size_t l = lower_index(fr.xs, xs);
    const auto t = static_cast<std::uint32_t>(lower_index(fr.ys, ys));
    return hit(fr, fr.corner.query(l, t));
  }

  /// Quadrant query with an exclusive (key, id) bound, split at x' = c - b
  /// (c the bound key) into a slab, where the bound does the y' filtering,
  /// and a quadrant lying wholly above the bound.
  std::optional<DragHit> quadrant_min_after(int frame, const Side& xs, const Side& ys, double key, PointId id,
                                            std::size_t* queries = nullptr) const {
    if (xs.value + ys.value > key) {
      if (queries) ++*queries;
      return quadrant_min(frame, xs, ys);
    }
    const double cut = key - ys.value;
    // With y' > b the column x' = cut is above the bound and goes to the quadrant.
    const bool cut_in_slab = !ys.open;
    const auto slab =
        slab_min(frame, TrackAxis::Vertical, Interval{xs, cut, !cut_in_slab}, rank_after(frame, key, id));
    Side rest{cut, cut_in_slab};
    if (cut == xs.value) rest.open = rest.open || xs.open;
    auto beyond = quadrant_min(frame, rest, ys);
    if (queries) *queries += 2;
    if (!slab) return beyond;
    if (!beyond) return slab;
    return std::make_pair(slab->key, slab->point.id) < std::make_pair(beyond->key, beyond->point.id) ? slab : beyond;
  }

  /// Largest rank whose (key, id) is <= the given pair; -1 if none.
  detail::Rank rank_after(int frame, double key, PointId id) const {
    const Frame& fr = frames_[frame];
    const auto it = std::upper_bound(fr.by_key.begin(), fr.by_key.end(), std::make_pair(key, id),
                                     [&](const std::pair<double, PointId>& b, std::uint32_t i) {
                                       return b < std::make_pair(fr.key[i], points_[i].id);
                                     });
    return static_cast<detail::Rank>(it - fr.by_key.begin()) - 1;
  }

  // -- world-coordinate queries ---------------------------------------------

  std::optional<DragHit> parallel_track(const DragQuery& q) const {
    if (q.kind != DragKind::ParallelTrack) throw std::invalid_argument("not a parallel-track query");
    q.validate();
    const int f = q.frame();
    const Symmetry s = frame_symmetry(f);
    const bool flipped = q.tracks[0].axis == TrackAxis::Horizontal ? s.flip_y : s.flip_x;
    Interval iv;
    if (!flipped) {
      iv = {Side{q.tracks[0].offset, !q.tracks[0].closed}, q.tracks[1].offset, !q.tracks[1].closed};
    } else {
      iv = {Side{-q.tracks[1].offset, !q.tracks[1].closed}, -q.tracks[0].offset, !q.tracks[0].closed};
    }
    const detail::Rank after = q.after ? rank_after(f, q.after->key, q.after->id) : -1;
    const TrackAxis axis = q.tracks[0].axis == TrackAxis::Horizontal ? TrackAxis::Horizontal : TrackAxis::Vertical;
    return slab_min(f, axis, iv, after);
  }

  std::optional<DragHit> out_of_corner(const DragQuery& q) const {
    if (q.kind != DragKind::OutOfCorner) throw std::invalid_argument("not an out-of-corner query");
    q.validate();
    const int f = q.frame();
    const Point c = frame_symmetry(f).apply(q.corner);
    const Side xs{c.x, !q.corner_x_closed}, ys{c.y, !q.corner_y_closed};
    if (q.after) return quadrant_min_after(f, xs, ys, q.after->key, q.after->id);
    return quadrant_min(f, xs, ys);
  }

  std::optional<DragHit> drag(const DragQuery& q) const {
    return q.kind == DragKind::ParallelTrack ? parallel_track(q) : out_of_corner(q);
  }

  static int frame_of(int slope, DragDirection dir) {
    DragQuery q;
    q.slope = slope;
    q.direction = dir;
    return q.frame();
  }

 private:
  struct Frame {
    std::vector<double> key;            // x' + y' per point
    std::vector<std::uint32_t> by_key;  // rank -> point index
    std::vector<double> xs, ys;         // sorted x', y'
    detail::SuccessorTree slab_x, slab_y;
    detail::DominanceTree corner;
  };

  static std::size_t lower_index(const std::vector<double>& sorted, const Side& s) {
    const auto it = s.open ? std::upper_bound(sorted.begin(), sorted.end(), s.value)
                           : std::lower_bound(sorted.begin(), sorted.end(), s.value);
    return static_cast<std::size_t>(it - sorted.begin());
  }

  std::optional<DragHit> hit(const Frame& fr, std::uint32_t rank) const {
    if (rank == detail::kNone) return std::nullopt;
    const std::uint32_t i = fr.by_key[rank];
    return DragHit{points_[i], fr.key[i]};
  }

  struct BaseOrders {
    std::vector<std::uint32_t> x, y, sum, diff;  // by (x), (y), (x + y), (x - y), then id
  };

  BaseOrders base_orders() const {
    const std::size_t n = points_.size();
    struct Rec {
      double c;
      PointId id;
      std::uint32_t i;
      bool operator<(const Rec& o) const { return c != o.c ? c < o.c : id < o.id; }
    };
    std::vector<Rec> recs(n);
    auto order_by = [&](auto coord) {
      for (std::size_t i = 0; i < n; ++i) recs[i] = {coord(points_[i]), points_[i].id, static_cast<std::uint32_t>(i)};
      std::sort(recs.begin(), recs.end());
      std::vector<std::uint32_t> ord(n);
      for (std::size_t r = 0; r < n; ++r) ord[r] = recs[r].i;
      return ord;
    };
    return {order_by([](const Point& p) { return p.x; }), order_by([](const Point& p) { return p.y; }),
            order_by([](const Point& p) { return p.x + p.y; }), order_by([](const Point& p) { return p.x - p.y; })};
  }

  // Order by (-c, id) from an order by (c, id): reverse, then restore
  // ascending ids inside each run of equal values.
  static std::vector<std::uint32_t> oriented(const std::vector<std::uint32_t>& ord, const std::vector<double>& c,
                                             bool flip) {
    if (!flip) return ord;
    std::vector<std::uint32_t> out(ord.rbegin(), ord.rend());
    for (std::size_t i = 0; i < out.size();) {
      std::size_t j = i + 1;
      while (j < out.size() && c[out[j]] == c[out[i]]) ++j;
      std::reverse(out.begin() + i, out.begin() + j);
      i = j;
    }
    return out;
  }

  void build_frame(int f, const BaseOrders& base) {
    const std::size_t n = points_.size();
    const Symmetry s = frame_symmetry(f);
    Frame& fr = frames_[f];
    std::vector<Point> canon(n);
    fr.key.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      canon[i] = s.apply(points_[i]);
      fr.key[i] = canon[i].x + canon[i].y;
    }
    fr.by_key = oriented(s.flip_x == s.flip_y ? base.sum : base.diff, fr.key, s.flip_x);
    std::vector<std::uint32_t> rank(n);
    for (std::size_t r = 0; r < n; ++r) rank[fr.by_key[r]] = static_cast<std::uint32_t>(r);
    std::vector<double> cx(n), cy(n);
    for (std::size_t i = 0; i < n; ++i) {
      cx[i] = canon[i].x;
      cy[i] = canon[i].y;
    }
    const auto xord = oriented(base.x, cx, s.flip_x);
    const auto yord = oriented(base.y, cy, s.flip_y);

    fr.xs.resize(n);
    fr.ys.resize(n);
    std::vector<std::uint32_t> xvals(n), yvals(n), ypos(n);
    for (std::size_t i = 0; i < n; ++i) {
      fr.xs[i] = canon[xord[i]].x;
      fr.ys[i] = canon[yord[i]].y;
      xvals[i] = rank[xord[i]];
      yvals[i] = rank[yord[i]];
      ypos[yord[i]] = static_cast<std::uint32_t>(i);
    }
    fr.slab_x = detail::SuccessorTree(std::move(xvals));
    fr.slab_y = detail::SuccessorTree(std::move(yvals));
    std::vector<std::uint32_t> yr(n), val(n);
    for (std::size_t i = 0; i < n; ++i) {
      yr[i] = ypos[xord[i]];
      val[i] = rank[xord[i]];
    }
    fr.corner = detail::DominanceTree(yr, val);
  }

  std::vector<Point> points_;
  std::array<Frame, 4> frames_;
};

}  // namespace annmax
