#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "degen_dt/geom.hpp"
#include "degen_dt/rng.hpp"

namespace degen_dt {

enum class PointSetKind { Grid, Polygon, Custom };

/// Ordered planar points; the label of points[i] is i + 1.
///
/// Grid(m): (m+1)^2 points at integer coordinates, labelled row-major from the
/// bottom-left corner, so label j*(m+1)+i+1 sits at (i, j).
/// Polygon(n): n points on the unit circle, label k at angle (k-1)*2pi/n.
struct PointSet {
  std::vector<Point2> points;
  PointSetKind kind = PointSetKind::Custom;
  int parameter = 0;  // m for grids, n for polygons

  std::size_t size() const { return points.size(); }
  const Point2& at_label(int label) const { return points.at(static_cast<std::size_t>(label - 1)); }
};

struct PerturbationParams {
  double scale_factor = 0.001;
  double d_min = 1.0;

  double sigma() const { return scale_factor * d_min; }
};

inline int grid_label(int m, int i, int j) { return j * (m + 1) + i + 1; }

inline PointSet make_grid(int m) {
  if (m < 1) throw InvalidInput("make_grid: m must be >= 1");
  PointSet p;
  p.kind = PointSetKind::Grid;
  p.parameter = m;
  p.points.reserve(static_cast<std::size_t>((m + 1) * (m + 1)));
  for (int j = 0; j <= m; ++j) {
    for (int i = 0; i <= m; ++i) p.points.push_back({static_cast<double>(i), static_cast<double>(j)});
  }
  return p;
}

inline Point2 polygon_vertex(int n, int label) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(label - 1) / static_cast<double>(n);
  return {std::cos(angle), std::sin(angle)};
}

inline PointSet make_polygon(int n) {
  if (n < 3) throw InvalidInput("make_polygon: n must be >= 3");
  PointSet p;
  p.kind = PointSetKind::Polygon;
  p.parameter = n;
  p.points.reserve(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) p.points.push_back(polygon_vertex(n, k));
  return p;
}

inline double min_pairwise_distance(const PointSet& p) {
  if (p.size() < 2) throw InvalidInput("min_pairwise_distance: need at least two points");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      best = std::min(best, std::hypot(p.points[i].x - p.points[j].x, p.points[i].y - p.points[j].y));
    }
  }
  return best;
}

inline PerturbationParams default_params(const PointSet& p, double scale_factor = 0.001) {
  return {scale_factor, min_pairwise_distance(p)};
}

/// Writes the shift of every coordinate, x then y per point, into `out`.
inline void draw_shifts(std::span<double> out, double sigma, const SeedSpec& seed) {
  StreamRng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& v : out) v = sigma * normal(rng);
}

inline void perturb_into(const PointSet& p, const PerturbationParams& params, const SeedSpec& seed,
                         PointSet& out) {
  if (!(params.scale_factor >= 0.0) || !(params.d_min > 0.0)) {
    throw InvalidInput("perturb: invalid perturbation parameters");
  }
  out.kind = p.kind;
  out.parameter = p.parameter;
  out.points.resize(p.size());
  if (params.scale_factor == 0.0) {
    out.points = p.points;
    return;
  }
  StreamRng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sigma = params.sigma();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double dx = sigma * normal(rng);
    const double dy = sigma * normal(rng);
    out.points[i] = {p.points[i].x + dx, p.points[i].y + dy};
  }
}

inline PointSet perturb(const PointSet& p, const PerturbationParams& params, const SeedSpec& seed) {
  PointSet out;
  perturb_into(p, params, seed, out);
  return out;
}

inline void write_csv(std::ostream& os, const PointSet& p) {
  os.precision(17);
  os << "label,x,y\n";
  for (std::size_t i = 0; i < p.size(); ++i) os << i + 1 << ',' << p.points[i].x << ',' << p.points[i].y << '\n';
}

}  // namespace degen_dt
