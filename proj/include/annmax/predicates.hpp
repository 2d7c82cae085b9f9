#pragma once

// Orientation and in-circle predicates.
//
// orient2d is exact for all finite doubles: a floating-point filter decides
// the easy cases and an expansion-arithmetic evaluation settles the rest.
// incircle is exact for integer coordinates of magnitude below 2^30 (evaluated
// in 128-bit integers) and falls back to long double otherwise.

#include <array>
#include <cmath>
#include <cstdint>

#include "annmax/geometry.hpp"

namespace annmax::predicates {

namespace detail {

struct TwoTerm {
  double hi;
  double lo;
};

inline TwoTerm two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

inline TwoTerm two_product(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

// Adds a double to a nonoverlapping expansion (Shewchuk's Grow-Expansion),
// dropping zero components.
template <std::size_t N>
std::size_t grow_expansion(std::array<double, N>& e, std::size_t len, double b) {
  std::size_t out = 0;
  double q = b;
  for (std::size_t i = 0; i < len; ++i) {
    const auto [s, err] = two_sum(q, e[i]);
    q = s;
    if (err != 0.0) e[out++] = err;
  }
  if (q != 0.0 || out == 0) e[out++] = q;
  return out;
}

inline bool integral_within(double v, double limit) { return std::abs(v) < limit && std::floor(v) == v; }

}  // namespace detail

/// Sign of the determinant | bx-ax  by-ay ; cx-ax  cy-ay |:
/// +1 when a, b, c turn counterclockwise, -1 clockwise, 0 collinear.
inline int orient2d(const Point& a, const Point& b, const Point& c) {
  const double detleft = (b.x - a.x) * (c.y - a.y);
  const double detright = (b.y - a.y) * (c.x - a.x);
  const double det = detleft - detright;
  const double detsum = std::abs(detleft) + std::abs(detright);
  // Shewchuk's ccwerrboundA.
  constexpr double kErrBound = 3.3306690738754716e-16;
  if (std::abs(det) > kErrBound * detsum) return det > 0 ? 1 : -1;
  if (detsum == 0.0) return 0;

  // det = bx*cy - bx*ay - ax*cy - by*cx + by*ax + ay*cx, six exact products.
  const std::array<detail::TwoTerm, 6> terms = {
      detail::two_product(b.x, c.y),  detail::two_product(-b.x, a.y), detail::two_product(-a.x, c.y),
      detail::two_product(-b.y, c.x), detail::two_product(b.y, a.x),  detail::two_product(a.y, c.x)};
  std::array<double, 16> e{};
  std::size_t len = 0;
  for (const auto& t : terms) {
    len = detail::grow_expansion(e, len, t.lo);
    len = detail::grow_expansion(e, len, t.hi);
  }
  // The most significant component carries the sign.
  for (std::size_t i = len; i-- > 0;)
    if (e[i] != 0.0) return e[i] > 0 ? 1 : -1;
  return 0;
}

/// Positive when d lies strictly inside the circle through the counterclockwise
/// triangle a, b, c; negative outside; zero on the circle.
inline int incircle(const Point& a, const Point& b, const Point& c, const Point& d) {
  constexpr double kLimit = 1073741824.0;  // 2^30
  const bool integral = detail::integral_within(a.x, kLimit) && detail::integral_within(a.y, kLimit) &&
                        detail::integral_within(b.x, kLimit) && detail::integral_within(b.y, kLimit) &&
                        detail::integral_within(c.x, kLimit) && detail::integral_within(c.y, kLimit) &&
                        detail::integral_within(d.x, kLimit) && detail::integral_within(d.y, kLimit);
  if (integral) {
    using i128 = __int128;
    const i128 adx = static_cast<std::int64_t>(a.x) - static_cast<std::int64_t>(d.x);
    const i128 ady = static_cast<std::int64_t>(a.y) - static_cast<std::int64_t>(d.y);
    const i128 bdx = static_cast<std::int64_t>(b.x) - static_cast<std::int64_t>(d.x);
    const i128 bdy = static_cast<std::int64_t>(b.y) - static_cast<std::int64_t>(d.y);
    const i128 cdx = static_cast<std::int64_t>(c.x) - static_cast<std::int64_t>(d.x);
    const i128 cdy = static_cast<std::int64_t>(c.y) - static_cast<std::int64_t>(d.y);
    const i128 alift = adx * adx + ady * ady;
    const i128 blift = bdx * bdx + bdy * bdy;
    const i128 clift = cdx * cdx + cdy * cdy;
    const i128 det = alift * (bdx * cdy - bdy * cdx) + blift * (cdx * ady - cdy * adx) + clift * (adx * bdy - ady * bdx);
    return det > 0 ? 1 : (det < 0 ? -1 : 0);
  }
  using ld = long double;
  const ld adx = ld(a.x) - d.x, ady = ld(a.y) - d.y;
  const ld bdx = ld(b.x) - d.x, bdy = ld(b.y) - d.y;
  const ld cdx = ld(c.x) - d.x, cdy = ld(c.y) - d.y;
  const ld det = (adx * adx + ady * ady) * (bdx * cdy - bdy * cdx) + (bdx * bdx + bdy * bdy) * (cdx * ady - cdy * adx) +
                 (cdx * cdx + cdy * cdy) * (adx * bdy - ady * bdx);
  return det > 0 ? 1 : (det < 0 ? -1 : 0);
}

}  // namespace annmax::predicates
