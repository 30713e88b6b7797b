#pragma once

// First-order analysis of incircle constraints under small shifts.
//
// Each incircle determinant vanishes at zero shift for a cocircular quadruple,
// so its sign is governed by its gradient in the shift coordinates. A set of
// such sign conditions is a cone of halfspaces through the origin, and the
// probability that an isotropic Gaussian shift lands in it is an orthant
// probability of the normals' Gram matrix.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "degen_dt/baselines.hpp"
#include "degen_dt/geom.hpp"
#include "degen_dt/orthant.hpp"
#include "degen_dt/pointsets.hpp"
#include "degen_dt/triangulate.hpp"

namespace degen_dt {

/// Unit normals (rows) of halfspaces through the origin in shift space.
/// Coordinates are ordered (x_1, y_1, x_2, y_2, ...) by point label.
struct HalfspaceSystem {
  int dim = 0;
  Eigen::MatrixXd normals;  // k x dim

  int size() const { return static_cast<int>(normals.rows()); }
};

/// Partial derivatives of the lifted incircle determinant with respect to
/// (x_A, y_A, x_B, y_B, x_C, y_C, x_D, y_D), by cofactor expansion.
inline std::array<double, 8> incircle_gradient(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  const std::array<Point2, 4> pts{a, b, c, d};
  double rows[4][4];
  for (int r = 0; r < 4; ++r) {
    const Point2& p = pts[static_cast<std::size_t>(r)];
    rows[r][0] = p.x;
    rows[r][1] = p.y;
    rows[r][2] = p.x * p.x + p.y * p.y;
    rows[r][3] = 1.0;
  }
  auto cofactor = [&](int row, int col) {
    double m[3][3];
    for (int r = 0, mr = 0; r < 4; ++r) {
      if (r == row) continue;
      for (int c2 = 0, mc = 0; c2 < 4; ++c2) {
        if (c2 == col) continue;
        m[mr][mc++] = rows[r][c2];
      }
      ++mr;
    }
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    return ((row + col) % 2 == 0) ? det : -det;
  };
  std::array<double, 8> grad{};
  for (int r = 0; r < 4; ++r) {
    const double lift_cof = cofactor(r, 2);
    grad[static_cast<std::size_t>(2 * r)] = cofactor(r, 0) + 2.0 * rows[r][0] * lift_cof;
    grad[static_cast<std::size_t>(2 * r + 1)] = cofactor(r, 1) + 2.0 * rows[r][1] * lift_cof;
  }
  return grad;
}

namespace detail {

/// Embeds the gradient of Incircle(labels...) at `base` positions as a unit
/// normal; `holds_when_negative` selects the halfspace Incircle < 0.
inline Eigen::VectorXd incircle_normal(const PointSet& base, const std::array<int, 4>& labels, bool holds_when_negative) {
  const auto g = incircle_gradient(base.at_label(labels[0]), base.at_label(labels[1]), base.at_label(labels[2]),
                                   base.at_label(labels[3]));
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * base.size()));
  for (int p = 0; p < 4; ++p) {
    const Eigen::Index at = 2 * (labels[static_cast<std::size_t>(p)] - 1);
    v(at) += g[static_cast<std::size_t>(2 * p)];
    v(at + 1) += g[static_cast<std::size_t>(2 * p + 1)];
  }
  const double norm = v.norm();
  if (norm == 0.0) throw DegenerateSystem("incircle gradient vanishes");
  v /= norm;
  return holds_when_negative ? Eigen::VectorXd(-v) : v;
}

inline HalfspaceSystem stack(int dim, const std::vector<Eigen::VectorXd>& rows) {
  HalfspaceSystem h;
  h.dim = dim;
  h.normals.resize(static_cast<Eigen::Index>(rows.size()), dim);
  for (std::size_t r = 0; r < rows.size(); ++r) h.normals.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
  return h;
}

}  // namespace detail

/// One normal per cell, in cell index order (j*m + i), positive side meaning
/// the cell receives the diagonal recorded in `code`.
inline HalfspaceSystem grid_halfspaces(const GridCode& code) {
  const int m = code.m;
  const PointSet grid = make_grid(m);
  std::vector<Eigen::VectorXd> rows;
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      const std::array<int, 4> labels{grid_label(m, i, j), grid_label(m, i + 1, j), grid_label(m, i + 1, j + 1),
                                      grid_label(m, i, j + 1)};
      rows.push_back(detail::incircle_normal(grid, labels, code.at(i, j) == 1));
    }
  }
  return detail::stack(2 * static_cast<int>(grid.size()), rows);
}

inline HalfspaceSystem grid2_halfspaces(const GridCode& code) {
  if (code.m != 2) throw InvalidInput("grid2_halfspaces: code must be 2 x 2");
  return grid_halfspaces(code);
}

struct ConstraintTree {
  std::vector<Triangle> nodes;             // sorted; node 0 is the root
  std::vector<std::pair<int, int>> edges;  // (parent, child), BFS order
};

inline ConstraintTree build_tree(const PolygonCode& code) {
  if (!is_valid(code)) throw InvalidInput("build_tree: invalid polygon code");
  ConstraintTree tree;
  tree.nodes = triangles_of(code).triangles;
  std::sort(tree.nodes.begin(), tree.nodes.end());
  const std::size_t count = tree.nodes.size();
  auto shares_edge = [](const Triangle& s, const Triangle& t) {
    int common = 0;
    for (int a : s) common += static_cast<int>(std::count(t.begin(), t.end(), a));
    return common == 2;
  };
  std::vector<char> seen(count, 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (std::size_t v = 0; v < count; ++v) {
      if (!seen[v] && shares_edge(tree.nodes[static_cast<std::size_t>(u)], tree.nodes[v])) {
        seen[v] = 1;
        tree.edges.emplace_back(u, static_cast<int>(v));
        frontier.push(static_cast<int>(v));
      }
    }
  }
  return tree;
}

/// One constraint per tree edge: the child's apex lies outside the parent's circumcircle.
inline HalfspaceSystem polygon_halfspaces(const PolygonCode& code) {
  const ConstraintTree tree = build_tree(code);
  const PointSet polygon = make_polygon(code.n);
  std::vector<Eigen::VectorXd> rows;
  for (const auto& [u, v] : tree.edges) {
    const Triangle& parent = tree.nodes[static_cast<std::size_t>(u)];
    const Triangle& child = tree.nodes[static_cast<std::size_t>(v)];
    int apex = 0;
    for (int c : child) {
      if (std::find(parent.begin(), parent.end(), c) == parent.end()) apex = c;
    }
    rows.push_back(detail::incircle_normal(polygon, {parent[0], parent[1], parent[2], apex}, true));
  }
  return detail::stack(2 * code.n, rows);
}

/// One constraint per other vertex q: q lies outside the circumcircle of ijk.
inline HalfspaceSystem triangle_halfspaces(int n, int i, int j, int k) {
  triangle_arcs(n, i, j, k);  // validates
  const PointSet polygon = make_polygon(n);
  std::vector<Eigen::VectorXd> rows;
  for (int q = 1; q <= n; ++q) {
    if (q == i || q == j || q == k) continue;
    rows.push_back(detail::incircle_normal(polygon, {i, j, k, q}, true));
  }
  return detail::stack(2 * n, rows);
}

/// Dihedral angles pi - arccos(N_i . N_j); the diagonal holds pi.
inline Eigen::MatrixXd gram_angles(const HalfspaceSystem& h) {
  const Eigen::MatrixXd gram = h.normals * h.normals.transpose();
  return gram.unaryExpr([](double c) { return std::numbers::pi - std::acos(std::clamp(c, -1.0, 1.0)); });
}

/// Girard's theorem: the cone of three halfspaces cuts a spherical triangle
/// of area alpha + beta + gamma - pi from the unit sphere.
inline OrthantResult spherical_triangle_prob(const HalfspaceSystem& h) {
  if (h.size() != 3) throw InvalidInput("spherical_triangle_prob: needs exactly three halfspaces");
  detail::gram_cholesky(h.normals);  // rank check
  const Eigen::MatrixXd angles = gram_angles(h);
  const double excess = angles(0, 1) + angles(0, 2) + angles(1, 2) - std::numbers::pi;
  return {excess / (4.0 * std::numbers::pi), 0.0, OrthantMethod::Girard};
}

inline OrthantResult orthant_prob(const HalfspaceSystem& h, double target_se, const OrthantOptions& opts = {}) {
  return orthant_probability(h.normals, target_se, opts);
}

struct GridProbability {
  GridCode code;
  OrthantResult result;
};

/// All 16 diagonal patterns of the 2 x 2 grid, in code-index order.
inline std::vector<GridProbability> grid2_distribution(double target_se = 2e-5, const OrthantOptions& opts = {}) {
  std::vector<GridProbability> out;
  for (std::uint64_t v = 0; v < 16; ++v) {
    GridCode code = grid_code_from_index(2, v);
    out.push_back({code, orthant_prob(grid2_halfspaces(code), target_se, opts)});
  }
  return out;
}

struct PolygonProbability {
  PolygonCode code;
  OrthantResult result;
};

inline std::vector<PolygonProbability> polygon_distribution(int n, double target_se = 2e-5, const OrthantOptions& opts = {}) {
  if (n < 3 || n > 7) throw InvalidInput("polygon_distribution: n must be in 3..7");
  std::vector<PolygonProbability> out;
  const auto codes = enumerate_polygon_triangulations(n);
  for (const auto& code : codes) {
    OrthantResult r;
    if (n <= 5) {
      r = {1.0 / static_cast<double>(codes.size()), 0.0, OrthantMethod::Exact};
    } else if (n == 6) {
      r = spherical_triangle_prob(polygon_halfspaces(code));
    } else {
      r = orthant_prob(polygon_halfspaces(code), target_se, opts);
    }
    out.push_back({code, r});
  }
  return out;
}

/// Probability that triangle ijk appears in the perturbed polygon's DT.
inline OrthantResult triangle_probability(int n, int i, int j, int k, double target_se = 2e-5,
                                          const OrthantOptions& opts = {}) {
  const HalfspaceSystem h = triangle_halfspaces(n, i, j, k);
  if (h.size() == 0) return {1.0, 0.0, OrthantMethod::Exact};
  if (h.size() == 3) return spherical_triangle_prob(h);
  return orthant_prob(h, target_se, opts);
}

}  // namespace degen_dt
