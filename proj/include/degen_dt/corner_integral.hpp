#pragma once

// Probability that a fixed triangle ABC of the regular n-gon appears in the
// Delaunay triangulation of its normal perturbation, as the three-variable
// integral
//
//   E[ prod_D Phi( -(z_A S_BCD - z_B S_ACD + z_C S_ABD) / S_ABC ) ]
//
// over independent standard normal z_A, z_B, z_C (S are signed areas of the
// unperturbed vertices; for the corner triangle all are positive).
//
// Numerics: with u = z_A - z_B, v = z_C - z_B the product depends on (u, v)
// through n - 3 half-planes a_D u + c_D v whose slopes are O(n^2), so it is
// close to an indicator of a wedge in the (u, v) plane. We integrate z_B by
// Gauss-Hermite, and (u, v) in polar coordinates with the angle split at every
// half-plane boundary (and into pieces of at most pi/8) and the radius split
// into geometric panels.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "degen_dt/baselines.hpp"
#include "degen_dt/geom.hpp"
#include "degen_dt/normal.hpp"
#include "degen_dt/pointsets.hpp"
#include "degen_dt/quadrature.hpp"

namespace degen_dt {

/// Largest n the quadrature accepts; cost grows roughly as n^2 and larger
/// polygons are left to Monte Carlo.
inline constexpr int kCornerMaxN = 200;

struct CornerIntegralSpec {
  int n = 4;
  Triangle triangle{1, 2, 3};
  int nodes = 8;            // per axis and panel; doubled for the error estimate
  double half_width = 8.0;  // radial cutoff in standard deviations of (u, v)
  double tolerance = 1e-3;  // allowed change under node doubling
};

class AccuracyFailure : public std::runtime_error {
 public:
  AccuracyFailure(const std::string& what, double coarse, double fine)
      : std::runtime_error(what), coarse_(coarse), fine_(fine) {}
  double coarse() const { return coarse_; }
  double fine() const { return fine_; }

 private:
  double coarse_, fine_;
};

struct SubAreas {
  double bcd = 0.0, acd = 0.0, abd = 0.0, abc = 0.0;
};

inline SubAreas sub_areas(int n, const Triangle& abc, int d) {
  const auto [a, b, c] = abc;
  if (a == b || a == c || b == c || d == a || d == b || d == c || std::min({a, b, c, d}) < 1 || std::max({a, b, c, d}) > n) {
    throw InvalidInput("sub_areas: need four distinct polygon vertices");
  }
  const Point2 pa = polygon_vertex(n, a), pb = polygon_vertex(n, b), pc = polygon_vertex(n, c), pd = polygon_vertex(n, d);
  return {triangle_area(pb, pc, pd), triangle_area(pa, pc, pd), triangle_area(pa, pb, pd), triangle_area(pa, pb, pc)};
}

namespace detail {

inline double signed_area(const Point2& p, const Point2& q, const Point2& r) {
  return 0.5 * ((q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x));
}

/// Per-D coefficients of the Phi argument, scaled by 1/S_ABC:
/// argument = -(ka z_A - kb z_B + kc z_C).
struct CornerCoefficients {
  std::vector<double> ka, kb, kc;
};

inline CornerCoefficients corner_coefficients(const CornerIntegralSpec& spec) {
  const int n = spec.n;
  if (n < 4) throw InvalidInput("corner integral: n must be >= 4");
  if (n > kCornerMaxN) throw InvalidInput("corner integral: n above " + std::to_string(kCornerMaxN) + " is beyond quadrature feasibility");
  if (spec.nodes < 8) throw InvalidInput("corner integral: nodes must be >= 8");
  auto [a, b, c] = spec.triangle;
  if (!(1 <= a && a < b && b < c && c <= n)) throw InvalidInput("corner integral: triangle labels must satisfy 1 <= a < b < c <= n");
  const Point2 pa = polygon_vertex(n, a), pb = polygon_vertex(n, b), pc = polygon_vertex(n, c);
  const double abc = signed_area(pa, pb, pc);
  CornerCoefficients k;
  for (int d = 1; d <= n; ++d) {
    if (d == a || d == b || d == c) continue;
    const Point2 pd = polygon_vertex(n, d);
    k.ka.push_back(signed_area(pb, pc, pd) / abc);
    k.kb.push_back(signed_area(pa, pc, pd) / abc);
    k.kc.push_back(signed_area(pa, pb, pd) / abc);
  }
  return k;
}

}  // namespace detail

/// The integrand including the three normal densities.
inline double corner_integrand(double z_a, double z_b, double z_c, const CornerIntegralSpec& spec) {
  const auto k = detail::corner_coefficients(spec);
  double log_product = 0.0;
  for (std::size_t d = 0; d < k.ka.size(); ++d) {
    const double phi = normal_cdf(-(z_a * k.ka[d] - z_b * k.kb[d] + z_c * k.kc[d]));
    if (phi == 0.0) return 0.0;
    log_product += std::log(phi);
  }
  return std::exp(log_product) * normal_pdf(z_a) * normal_pdf(z_b) * normal_pdf(z_c);
}

namespace detail {

/// One quadrature pass with `q` nodes per axis and panel.
inline double corner_quadrature(const CornerIntegralSpec& spec, int q) {
  const auto k = corner_coefficients(spec);
  const std::size_t count = k.ka.size();
  // With z_B = t, z_A = t + u, z_C = t + v and ka - kb + kc = 1, each Phi
  // argument is -t - ka u - kc v.
  const double two_pi = 2.0 * std::numbers::pi;

  std::vector<double> breaks{0.0};
  double steepest = 1.0;
  for (std::size_t d = 0; d < count; ++d) {
    double psi = std::atan2(-k.ka[d], k.kc[d]);
    if (psi < 0.0) psi += two_pi;
    breaks.push_back(psi);
    breaks.push_back(std::fmod(psi + std::numbers::pi, two_pi));
    steepest = std::max(steepest, std::hypot(k.ka[d], k.kc[d]));
  }
  breaks.push_back(two_pi);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(), [](double x, double y) { return y - x < 1e-14; }), breaks.end());
  // Long gaps get split so plain Gauss-Legendre sees a smooth, short piece.
  std::vector<double> refined{breaks.front()};
  const double max_gap = std::numbers::pi / 8.0;
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    const double gap = breaks[i] - breaks[i - 1];
    const int pieces = std::max(1, static_cast<int>(std::ceil(gap / max_gap)));
    for (int p = 1; p <= pieces; ++p) refined.push_back(breaks[i - 1] + gap * p / pieces);
  }
  breaks = std::move(refined);

  // Radial panels: [0, r0] then doubling up to the cutoff. (u, v) has
  // covariance [[2, 1], [1, 2]], largest standard deviation sqrt(3).
  const double r_max = spec.half_width * std::sqrt(3.0);
  std::vector<double> radii{0.0};
  for (double r = 0.05 / steepest; r < r_max; r *= 2.0) radii.push_back(r);
  radii.push_back(r_max);

  const QuadratureRule gl = gauss_legendre(q);
  const QuadratureRule gh = gauss_hermite_normal(q);
  const double s_scale = 1.0 / std::sqrt(3.0);
  const double s_extent = gh.nodes.back() * s_scale;
  const double density_norm = 1.0 / (two_pi * std::sqrt(3.0));

  std::vector<double> active;
  active.reserve(count);
  double total = 0.0;
  for (std::size_t seg = 0; seg + 1 < breaks.size(); ++seg) {
    const double lo = breaks[seg], h = breaks[seg + 1] - breaks[seg];
    for (int ia = 0; ia < q; ++ia) {
      const double x = 0.5 * (gl.nodes[static_cast<std::size_t>(ia)] + 1.0);
      const double psi = lo + h * x;
      const double w_psi = 0.5 * gl.weights[static_cast<std::size_t>(ia)] * h;
      const double cs = std::cos(psi), sn = std::sin(psi);
      const double quad_form = (2.0 / 3.0) * (1.0 - cs * sn);  // Q(u, v) / r^2
      for (std::size_t panel = 0; panel + 1 < radii.size(); ++panel) {
        const double r_lo = radii[panel], dr = radii[panel + 1] - radii[panel];
        for (int ir = 0; ir < q; ++ir) {
          const double r = r_lo + 0.5 * dr * (gl.nodes[static_cast<std::size_t>(ir)] + 1.0);
          const double w_r = 0.5 * dr * gl.weights[static_cast<std::size_t>(ir)];
          const double density = density_norm * std::exp(-0.5 * quad_form * r * r) * r;
          if (density == 0.0) continue;
          const double u = r * cs, v = r * sn;
          const double shift = (u + v) / 3.0;  // the z_B mean given (u, v) is -(u + v)/3
          active.clear();
          bool zero = false;
          for (std::size_t d = 0; d < count; ++d) {
            const double b = shift - k.ka[d] * u - k.kc[d] * v;
            if (b + s_extent < -40.0) {
              zero = true;
              break;
            }
            if (b - s_extent < 9.0) active.push_back(b);
          }
          if (zero) continue;
          double expectation = 0.0;
          for (std::size_t it = 0; it < gh.nodes.size(); ++it) {
            const double s = gh.nodes[it] * s_scale;
            double product = 1.0;
            for (double b : active) {
              product *= normal_cdf(b - s);
              if (product < 1e-300) {
                product = 0.0;
                break;
              }
            }
            expectation += gh.weights[it] * product;
          }
          total += w_psi * w_r * density * expectation;
        }
      }
    }
  }
  return total;
}

}  // namespace detail

struct CornerProbability {
  double probability = 0.0;       // the finer estimate
  double truncation_error = 0.0;  // |fine - coarse|
  int nodes = 0;
};

/// Evaluates at `nodes` and 2*`nodes`; throws AccuracyFailure when the two
/// differ by more than `spec.tolerance`.
inline CornerProbability corner_probability(const CornerIntegralSpec& spec) {
  const double coarse = detail::corner_quadrature(spec, spec.nodes);
  const double fine = detail::corner_quadrature(spec, 2 * spec.nodes);
  const double err = std::fabs(fine - coarse);
  if (!(err <= spec.tolerance)) {
    throw AccuracyFailure("corner_probability: quadrature did not converge under node doubling", coarse, fine);
  }
  return {fine, err, 2 * spec.nodes};
}

/// Quadrature at a single node count, without the convergence check.
inline double corner_probability_at(const CornerIntegralSpec& spec, int nodes) {
  return detail::corner_quadrature(spec, nodes);
}

}  // namespace degen_dt
