#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "degen_dt/geom.hpp"
#include "oracle/oracles.hpp"

using namespace degen_dt;

TEST(Orient2d, CanonicalCases) {
  EXPECT_EQ(orient2d({0, 0}, {1, 0}, {0, 1}), Sign::Positive);
  EXPECT_EQ(orient2d({0, 0}, {1, 1}, {2, 2}), Sign::Zero);
  EXPECT_EQ(orient2d({0, 0}, {0, 1}, {1, 0}), Sign::Negative);
}

TEST(Orient2d, RejectsNonFinite) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_THROW(orient2d({nan, 0}, {1, 0}, {0, 1}), InvalidInput);
  EXPECT_THROW(orient2d({0, 0}, {inf, 0}, {0, 1}), InvalidInput);
}

TEST(Incircle, CanonicalCases) {
  EXPECT_EQ(incircle({0, 0}, {1, 0}, {1, 1}, {0, 1}), Sign::Zero);
  EXPECT_EQ(incircle({0, 0}, {1, 0}, {1, 1}, {0.5, 0.5}), Sign::Positive);
  EXPECT_EQ(incircle({0, 0}, {1, 0}, {1, 1}, {-2, -2}), Sign::Negative);
}

TEST(Incircle, PreconditionsAndErrors) {
  EXPECT_THROW(incircle({0, 0}, {1, 1}, {1, 0}, {0.5, 0.5}), PreconditionError);  // clockwise
  EXPECT_THROW(incircle({0, 0}, {1, 1}, {2, 2}, {0.5, 0.5}), PreconditionError);  // collinear
  EXPECT_THROW(incircle({0, 0}, {1, 0}, {1, 1}, {std::nan(""), 0}), InvalidInput);
}

TEST(Incircle, CyclicPermutationInvariant) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  int checked = 0;
  while (checked < 2000) {
    Point2 a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)}, d{u(rng), u(rng)};
    if (orient2d(a, b, c) != Sign::Positive) continue;
    const Sign s = incircle(a, b, c, d);
    EXPECT_EQ(incircle(b, c, a, d), s);
    EXPECT_EQ(incircle(c, a, b, d), s);
    ++checked;
  }
}

TEST(Incircle, FarReflectionIsOutside) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1, 1);
  int checked = 0;
  while (checked < 500) {
    Point2 a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)}, d{u(rng) * 0.1, u(rng) * 0.1};
    if (orient2d(a, b, c) != Sign::Positive || incircle(a, b, c, d) != Sign::Positive) continue;
    // Circumcentre, then reflect d through it and push it far out.
    const double bx = b.x - a.x, by = b.y - a.y, cx = c.x - a.x, cy = c.y - a.y;
    const double den = 2 * (bx * cy - by * cx);
    const Point2 o{a.x + (cy * (bx * bx + by * by) - by * (cx * cx + cy * cy)) / den,
                   a.y + (bx * (cx * cx + cy * cy) - cx * (bx * bx + by * by)) / den};
    const Point2 far{o.x - 1e6 * (d.x - o.x) - 1e3, o.y - 1e6 * (d.y - o.y)};
    EXPECT_EQ(incircle(a, b, c, far), Sign::Negative);
    EXPECT_EQ(oracle::incircle(a, b, c, far), -1);
    ++checked;
  }
}

TEST(TriangleArea, Examples) {
  EXPECT_DOUBLE_EQ(triangle_area({0, 0}, {1, 0}, {0, 1}), 0.5);
  EXPECT_DOUBLE_EQ(triangle_area({0, 0}, {1, 1}, {2, 2}), 0.0);
  EXPECT_DOUBLE_EQ(triangle_area({1, 0}, {0, 1}, {-1, 0}), 1.0);
  EXPECT_DOUBLE_EQ(triangle_area({0, 1}, {1, 0}, {0, 0}), 0.5);  // orientation-free
}

// The filtered predicates must agree with exact rationals on inputs built to
// sit on or within a few ulps of degeneracy.
TEST(Predicates, AgreeWithRationalOracleNearDegeneracy) {
  oracle::AdversarialSource src(2024);
  int mismatches = 0, zeros = 0;
  for (int t = 0; t < 20000; ++t) {
    const auto q = src.cocircular();
    const int o = oracle::orient(q[0], q[1], q[2]);
    if (static_cast<int>(orient2d(q[0], q[1], q[2])) != o) ++mismatches;
    if (o > 0) {
      const int s = oracle::incircle(q[0], q[1], q[2], q[3]);
      zeros += s == 0;
      if (static_cast<int>(incircle(q[0], q[1], q[2], q[3])) != s) ++mismatches;
    }
    const auto l = src.collinear();
    if (static_cast<int>(orient2d(l[0], l[1], l[2])) != oracle::orient(l[0], l[1], l[2])) ++mismatches;
  }
  EXPECT_EQ(mismatches, 0);
  EXPECT_GT(zeros, 0);  // the generator does hit exact cocircularity
}

TEST(Predicates, PerturbedCocircularDownToTinyMagnitudes) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> ang(0.0, 2 * M_PI);
  std::uniform_int_distribution<int> expo(-40, -3);
  int mismatches = 0;
  for (int t = 0; t < 20000; ++t) {
    double th[4];
    for (double& x : th) x = ang(rng);
    std::sort(th, th + 3);
    Point2 p[4];
    for (int k = 0; k < 4; ++k) p[k] = {std::cos(th[k]), std::sin(th[k])};
    const double eps = std::ldexp(1.0, expo(rng));
    p[3].x += eps * (ang(rng) - M_PI);
    p[3].y += eps * (ang(rng) - M_PI);
    if (oracle::orient(p[0], p[1], p[2]) <= 0) continue;
    if (static_cast<int>(incircle(p[0], p[1], p[2], p[3])) != oracle::incircle(p[0], p[1], p[2], p[3])) ++mismatches;
  }
  EXPECT_EQ(mismatches, 0);
}
