#pragma once

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

namespace degen_dt {

inline double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Standard normal quantile; p is clamped into the open unit interval.
inline double normal_quantile(double p) {
  constexpr double kTiny = 1e-300;
  if (p <= kTiny) p = kTiny;
  if (p >= 1.0) p = std::nextafter(1.0, 0.0);
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

}  // namespace degen_dt
