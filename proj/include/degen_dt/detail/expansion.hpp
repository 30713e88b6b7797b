#pragma once

// Floating-point expansion arithmetic (nonoverlapping sums of doubles).
// An expansion represents its value exactly; sums and products below are
// error-free, so the sign of the most significant component is exact.
// Requires IEEE-754 binary64 with round-to-nearest-even and no extended
// precision or fused contraction (see -ffp-contract=off in CMake).

#include <cmath>
#include <vector>

namespace degen_dt::detail {

using Expansion = std::vector<double>;

inline void fast_two_sum(double a, double b, double& x, double& y) {
  x = a + b;
  const double bvirt = x - a;
  y = b - bvirt;
}

inline void two_sum(double a, double b, double& x, double& y) {
  x = a + b;
  const double bvirt = x - a;
  const double avirt = x - bvirt;
  const double bround = b - bvirt;
  const double around = a - avirt;
  y = around + bround;
}

inline void two_diff(double a, double b, double& x, double& y) {
  x = a - b;
  const double bvirt = a - x;
  const double avirt = x + bvirt;
  const double bround = bvirt - b;
  const double around = a - avirt;
  y = around + bround;
}

inline void split(double a, double& hi, double& lo) {
  constexpr double kSplitter = 134217729.0;  // 2^27 + 1
  const double c = kSplitter * a;
  const double abig = c - a;
  hi = c - abig;
  lo = a - hi;
}

inline void two_product(double a, double b, double& x, double& y) {
  x = a * b;
  double ahi, alo, bhi, blo;
  split(a, ahi, alo);
  split(b, bhi, blo);
  const double err1 = x - (ahi * bhi);
  const double err2 = err1 - (alo * bhi);
  const double err3 = err2 - (ahi * blo);
  y = (alo * blo) - err3;
}

// Exact difference a - b as a two-component expansion.
inline Expansion exact_diff(double a, double b) {
  double x, y;
  two_diff(a, b, x, y);
  Expansion e;
  if (y != 0.0) e.push_back(y);
  if (x != 0.0) e.push_back(x);
  return e;
}

// e + b, zero components eliminated.
inline Expansion grow_expansion(const Expansion& e, double b) {
  Expansion h;
  h.reserve(e.size() + 1);
  double q = b;
  for (double component : e) {
    double sum, err;
    two_sum(q, component, sum, err);
    q = sum;
    if (err != 0.0) h.push_back(err);
  }
  if (q != 0.0 || h.empty()) h.push_back(q);
  return h;
}

inline Expansion expansion_sum(const Expansion& e, const Expansion& f) {
  Expansion h = e;
  for (double component : f) h = grow_expansion(h, component);
  return h;
}

inline Expansion negate(Expansion e) {
  for (double& c : e) c = -c;
  return e;
}

inline Expansion scale_expansion(const Expansion& e, double b) {
  Expansion h;
  if (e.empty() || b == 0.0) return h;
  h.reserve(2 * e.size());
  double q, hh;
  two_product(e[0], b, q, hh);
  if (hh != 0.0) h.push_back(hh);
  for (std::size_t i = 1; i < e.size(); ++i) {
    double product1, product0, sum;
    two_product(e[i], b, product1, product0);
    two_sum(q, product0, sum, hh);
    if (hh != 0.0) h.push_back(hh);
    fast_two_sum(product1, sum, q, hh);
    if (hh != 0.0) h.push_back(hh);
  }
  if (q != 0.0 || h.empty()) h.push_back(q);
  return h;
}

inline Expansion expansion_product(const Expansion& e, const Expansion& f) {
  Expansion h;
  for (double component : f) h = expansion_sum(h, scale_expansion(e, component));
  return h;
}

inline int expansion_sign(const Expansion& e) {
  for (auto it = e.rbegin(); it != e.rend(); ++it) {
    if (*it > 0.0) return 1;
    if (*it < 0.0) return -1;
  }
  return 0;
}

}  // namespace degen_dt::detail
