#pragma once

// Exact-sign planar predicates.
//
// Both predicates first evaluate the determinant in double precision and
// compare it with a certified forward error bound; only when the bound does
// not separate the value from zero is the determinant re-evaluated exactly
// with expansion arithmetic.

#include <cmath>
#include <stdexcept>
#include <string>

#include "degen_dt/detail/expansion.hpp"

namespace degen_dt {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

enum class Sign : int { Negative = -1, Zero = 0, Positive = 1 };

inline Sign sign_of(int s) { return s > 0 ? Sign::Positive : (s < 0 ? Sign::Negative : Sign::Zero); }

inline const char* to_string(Sign s) {
  switch (s) {
    case Sign::Negative: return "Negative";
    case Sign::Zero: return "Zero";
    case Sign::Positive: return "Positive";
  }
  return "?";
}

class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {

constexpr double kEpsilon = 0x1p-53;
constexpr double kCcwErrBoundA = (3.0 + 16.0 * kEpsilon) * kEpsilon;
constexpr double kIccErrBoundA = (10.0 + 96.0 * kEpsilon) * kEpsilon;

inline void require_finite(const Point2& p) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
    throw InvalidInput("non-finite coordinate");
  }
}

inline int orient2d_exact(const Point2& a, const Point2& b, const Point2& c) {
  const Expansion acx = exact_diff(a.x, c.x);
  const Expansion acy = exact_diff(a.y, c.y);
  const Expansion bcx = exact_diff(b.x, c.x);
  const Expansion bcy = exact_diff(b.y, c.y);
  const Expansion left = expansion_product(acx, bcy);
  const Expansion right = expansion_product(acy, bcx);
  return expansion_sign(expansion_sum(left, negate(right)));
}

inline int orient2d_sign(const Point2& a, const Point2& b, const Point2& c) {
  const double detleft = (a.x - c.x) * (b.y - c.y);
  const double detright = (a.y - c.y) * (b.x - c.x);
  const double det = detleft - detright;
  double detsum;
  if (detleft > 0.0) {
    if (detright <= 0.0) return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
    detsum = detleft + detright;
  } else if (detleft < 0.0) {
    if (detright >= 0.0) return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
    detsum = -detleft - detright;
  } else {
    return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
  }
  const double errbound = kCcwErrBoundA * detsum;
  if (det > errbound) return 1;
  if (-det > errbound) return -1;
  return orient2d_exact(a, b, c);
}

inline int incircle_exact(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  const Expansion adx = exact_diff(a.x, d.x), ady = exact_diff(a.y, d.y);
  const Expansion bdx = exact_diff(b.x, d.x), bdy = exact_diff(b.y, d.y);
  const Expansion cdx = exact_diff(c.x, d.x), cdy = exact_diff(c.y, d.y);

  auto lift = [](const Expansion& dx, const Expansion& dy) {
    return expansion_sum(expansion_product(dx, dx), expansion_product(dy, dy));
  };
  auto cross = [](const Expansion& ux, const Expansion& uy, const Expansion& vx, const Expansion& vy) {
    return expansion_sum(expansion_product(ux, vy), negate(expansion_product(vx, uy)));
  };

  const Expansion bc = cross(bdx, bdy, cdx, cdy);
  const Expansion ca = cross(cdx, cdy, adx, ady);
  const Expansion ab = cross(adx, ady, bdx, bdy);
  Expansion det = expansion_product(lift(adx, ady), bc);
  det = expansion_sum(det, expansion_product(lift(bdx, bdy), ca));
  det = expansion_sum(det, expansion_product(lift(cdx, cdy), ab));
  return expansion_sign(det);
}

inline int incircle_sign(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;

  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double alift = adx * adx + ady * ady;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double blift = bdx * bdx + bdy * bdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;
  const double clift = cdx * cdx + cdy * cdy;

  const double det =
      alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
  const double permanent = (std::fabs(bdxcdy) + std::fabs(cdxbdy)) * alift +
                           (std::fabs(cdxady) + std::fabs(adxcdy)) * blift +
                           (std::fabs(adxbdy) + std::fabs(bdxady)) * clift;
  const double errbound = kIccErrBoundA * permanent;
  if (det > errbound) return 1;
  if (-det > errbound) return -1;
  return incircle_exact(a, b, c, d);
}

}  // namespace detail

/// Orientation of the triple: Positive for counter-clockwise, Zero for collinear.
inline Sign orient2d(const Point2& a, const Point2& b, const Point2& c) {
  detail::require_finite(a);
  detail::require_finite(b);
  detail::require_finite(c);
  return sign_of(detail::orient2d_sign(a, b, c));
}

/// Sign of the lifted 4x4 determinant: Positive iff `d` lies strictly inside
/// the circumcircle of the counter-clockwise triangle `abc`.
inline Sign incircle(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  detail::require_finite(d);
  if (orient2d(a, b, c) != Sign::Positive) {
    throw PreconditionError("incircle: triangle is not counter-clockwise");
  }
  return sign_of(detail::incircle_sign(a, b, c, d));
}

inline double triangle_area(const Point2& a, const Point2& b, const Point2& c) {
  detail::require_finite(a);
  detail::require_finite(b);
  detail::require_finite(c);
  if (detail::orient2d_sign(a, b, c) == 0) return 0.0;
  return 0.5 * std::fabs((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
}

}  // namespace degen_dt
