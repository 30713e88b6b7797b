#pragma once

// Diagonal clustering on large grids.
//
// Two graphs are derived from a diagonal pattern T:
//   - the diagonal graph on all (m+1)^2 grid vertices, whose edges are the m^2
//     cell diagonals;
//   - the triangle graph on the 2m^2 triangles, adjacent when they share a
//     horizontal or vertical grid edge. Every triangle has two grid edges, so
//     its components are paths and cycles.
// Their component counts satisfy CC(diagonal graph) = CC(triangle graph) + 1.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "degen_dt/baselines.hpp"
#include "degen_dt/normal.hpp"
#include "degen_dt/parallel.hpp"
#include "degen_dt/pointsets.hpp"
#include "degen_dt/simulate.hpp"
#include "degen_dt/triangulate.hpp"

namespace degen_dt {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0), components_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    std::size_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      const std::size_t next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    --components_;
  }

  std::size_t components() const { return components_; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::uint8_t> rank_;
  std::size_t components_;
};

enum class Side { Bottom = 0, Right = 1, Top = 2, Left = 3 };

inline Side opposite(Side s) { return static_cast<Side>((static_cast<int>(s) + 2) % 4); }

/// Triangle 0 of a cell holds its bottom edge, triangle 1 its top edge. With
/// '/' (bit 1) triangle 0 is the lower-right half; with '\' the lower-left.
inline int triangle_with_side(std::uint8_t bit, Side s) {
  switch (s) {
    case Side::Bottom: return 0;
    case Side::Top: return 1;
    case Side::Right: return bit ? 0 : 1;
    case Side::Left: return bit ? 1 : 0;
  }
  return 0;
}

inline Side other_side(std::uint8_t bit, int triangle, Side entered) {
  const Side vertical_side = triangle == 0 ? Side::Bottom : Side::Top;
  const Side lateral_side = (triangle == 0) == (bit == 1) ? Side::Right : Side::Left;
  return entered == vertical_side ? lateral_side : vertical_side;
}

inline std::size_t count_components_hat(const GridCode& code) {
  const int m = code.m;
  UnionFind uf(static_cast<std::size_t>((m + 1) * (m + 1)));
  auto vertex = [m](int i, int j) { return static_cast<std::size_t>(j * (m + 1) + i); };
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      if (code.at(i, j)) {
        uf.unite(vertex(i, j), vertex(i + 1, j + 1));
      } else {
        uf.unite(vertex(i + 1, j), vertex(i, j + 1));
      }
    }
  }
  return uf.components();
}

inline std::size_t triangle_node(int m, int i, int j, int t) { return static_cast<std::size_t>(2 * (j * m + i) + t); }

/// Adjacency lists of the triangle graph; every node has degree <= 2.
inline std::vector<std::vector<std::size_t>> triangle_graph(const GridCode& code) {
  const int m = code.m;
  std::vector<std::vector<std::size_t>> adj(static_cast<std::size_t>(2 * m * m));
  auto link = [&](std::size_t a, std::size_t b) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  };
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      if (i + 1 < m) {
        link(triangle_node(m, i, j, triangle_with_side(code.at(i, j), Side::Right)),
             triangle_node(m, i + 1, j, triangle_with_side(code.at(i + 1, j), Side::Left)));
      }
      if (j + 1 < m) {
        link(triangle_node(m, i, j, triangle_with_side(code.at(i, j), Side::Top)),
             triangle_node(m, i, j + 1, triangle_with_side(code.at(i, j + 1), Side::Bottom)));
      }
    }
  }
  return adj;
}

inline std::size_t count_components_G(const GridCode& code) {
  const auto adj = triangle_graph(code);
  UnionFind uf(adj.size());
  for (std::size_t a = 0; a < adj.size(); ++a)
    for (std::size_t b : adj[a]) uf.unite(a, b);
  return uf.components();
}

// ---------------------------------------------------------------------------
// Cycle walks

enum class DiagonalModel { DTPerturbed, UniformDiagonals };

inline const char* to_string(DiagonalModel m) {
  return m == DiagonalModel::DTPerturbed ? "DTPerturbed" : "UniformDiagonals";
}

inline DiagonalModel parse_model(const std::string& s) {
  if (s == "dt" || s == "DTPerturbed") return DiagonalModel::DTPerturbed;
  if (s == "uniform" || s == "ut" || s == "UniformDiagonals") return DiagonalModel::UniformDiagonals;
  throw InvalidInput("unknown model '" + s + "' (expected dt or uniform)");
}

/// Reads diagonals from a complete code.
struct FixedDiagonals {
  const GridCode* code;
  std::uint8_t operator()(int i, int j) { return code->at(i, j); }
};

/// Reveals each cell's diagonal by a fair coin the first time it is visited.
class LazyUniformDiagonals {
 public:
  LazyUniformDiagonals(int m, StreamRng rng) : m_(m), rng_(rng), revealed_(static_cast<std::size_t>(m * m), -1) {}

  std::uint8_t operator()(int i, int j) {
    auto& cell = revealed_[static_cast<std::size_t>(j * m_ + i)];
    if (cell < 0) cell = rng_.coin() ? 1 : 0;
    return static_cast<std::uint8_t>(cell);
  }

  /// Revealed cells as a code; unrevealed cells read as 0.
  GridCode frozen() const {
    GridCode code(m_);
    for (std::size_t c = 0; c < revealed_.size(); ++c) code.bits[c] = revealed_[c] > 0 ? 1 : 0;
    return code;
  }

 private:
  int m_;
  StreamRng rng_;
  std::vector<std::int8_t> revealed_;
};

struct WalkStep {
  int i = 0, j = 0, triangle = 0;
  friend bool operator==(const WalkStep&, const WalkStep&) = default;
};

enum class WalkEnd { Closed, Overflow, BoundaryEscape };

struct WalkOutcome {
  WalkEnd end = WalkEnd::Closed;
  int length = 0;  // steps taken; the cycle length when Closed
  std::vector<WalkStep> path;  // filled when requested
};

/// Follows the triangle graph from (start_i, start_j, triangle 0), leaving
/// through the triangle's non-bottom grid edge, until it returns to the start
/// triangle, exceeds `cap` steps, or leaves the grid.
template <typename Diagonals>
WalkOutcome cycle_walk(Diagonals&& diag, int m, int start_i, int start_j, int cap, bool record_path = false) {
  if (start_i < 0 || start_j < 0 || start_i >= m || start_j >= m) throw InvalidInput("cycle_walk: start outside grid");
  WalkOutcome out;
  int i = start_i, j = start_j, t = 0;
  Side exit = other_side(diag(i, j), 0, Side::Bottom);
  if (record_path) out.path.push_back({i, j, t});
  while (true) {
    switch (exit) {
      case Side::Bottom: --j; break;
      case Side::Top: ++j; break;
      case Side::Left: --i; break;
      case Side::Right: ++i; break;
    }
    if (i < 0 || j < 0 || i >= m || j >= m) {
      out.end = WalkEnd::BoundaryEscape;
      return out;
    }
    ++out.length;
    const Side entered = opposite(exit);
    const std::uint8_t bit = diag(i, j);
    t = triangle_with_side(bit, entered);
    if (record_path) out.path.push_back({i, j, t});
    if (i == start_i && j == start_j && t == 0) {
      out.end = WalkEnd::Closed;
      return out;
    }
    if (out.length >= cap) {
      out.end = WalkEnd::Overflow;
      return out;
    }
    exit = other_side(bit, t, entered);
  }
}

struct WalkStats {
  int cap = 40;
  int grid_size = 41;
  std::vector<std::uint64_t> histogram;  // index = closed cycle length, 0..cap
  std::uint64_t overflow_count = 0;      // walks not closed within cap (includes boundary escapes)
  std::uint64_t boundary_escapes = 0;
  std::uint64_t walks = 0;
  std::uint64_t discards = 0;

  std::uint64_t closed() const { return walks - overflow_count; }

  /// Mean length among walks that closed within the cap.
  double mean_capped() const {
    double s = 0.0;
    for (std::size_t t = 0; t < histogram.size(); ++t) s += static_cast<double>(t * histogram[t]);
    return closed() ? s / static_cast<double>(closed()) : 0.0;
  }

  double variance_capped() const {
    const double mu = mean_capped();
    double s = 0.0;
    for (std::size_t t = 0; t < histogram.size(); ++t) {
      const double d = static_cast<double>(t) - mu;
      s += d * d * static_cast<double>(histogram[t]);
    }
    return closed() > 1 ? s / static_cast<double>(closed() - 1) : 0.0;
  }

  /// 95% normal-approximation half-width of mean_capped.
  double half_width_95() const { return closed() > 1 ? 1.959963984540054 * std::sqrt(variance_capped() / static_cast<double>(closed())) : 0.0; }
};

inline WalkStats walk_statistics(DiagonalModel model, std::uint64_t walks, int cap, std::uint64_t master_seed, int m = 41,
                                 unsigned threads = 0, double scale_factor = 0.001) {
  if (cap < 4) throw InvalidInput("walk_statistics: cap must be >= 4");
  if (m < 1) throw InvalidInput("walk_statistics: m must be >= 1");
  const int center = m / 2;
  WalkStats init;
  init.cap = cap;
  init.grid_size = m;
  init.histogram.assign(static_cast<std::size_t>(cap + 1), 0);
  const PointSet base = make_grid(m);
  const PerturbationParams params{scale_factor, 1.0};
  auto parts = parallel_ranges(walks, threads, init, [&](std::uint64_t begin, std::uint64_t end, WalkStats& stats) {
    PointSet work;
    for (std::uint64_t w = begin; w < end; ++w) {
      WalkOutcome outcome;
      if (model == DiagonalModel::UniformDiagonals) {
        LazyUniformDiagonals diag(m, StreamRng(SeedSpec{master_seed, w, 0}, /*domain=*/2));
        outcome = cycle_walk(diag, m, center, center, cap);
      } else {
        detail::run_iteration(base, params, master_seed, w, 64, work, stats.discards, [&](const PointSet& p) {
          const GridCode code = grid_dt(p);
          outcome = cycle_walk(FixedDiagonals{&code}, m, center, center, cap);
        });
      }
      ++stats.walks;
      if (outcome.end == WalkEnd::Closed) {
        ++stats.histogram[static_cast<std::size_t>(outcome.length)];
      } else {
        ++stats.overflow_count;
        if (outcome.end == WalkEnd::BoundaryEscape) ++stats.boundary_escapes;
      }
    }
  });
  WalkStats total = init;
  for (const auto& s : parts) {
    total.walks += s.walks;
    total.overflow_count += s.overflow_count;
    total.boundary_escapes += s.boundary_escapes;
    total.discards += s.discards;
    for (std::size_t t = 0; t < s.histogram.size(); ++t) total.histogram[t] += s.histogram[t];
  }
  return total;
}

// ---------------------------------------------------------------------------
// Component census

inline GridCode sample_perturbed_grid_dt(int m, const SeedSpec& seed, std::uint64_t* discards = nullptr,
                                         double scale_factor = 0.001) {
  const PointSet base = make_grid(m);
  const PerturbationParams params{scale_factor, 1.0};
  PointSet work;
  std::uint64_t local = 0;
  GridCode code;
  detail::run_iteration(base, params, seed.master_seed, seed.iteration_index, 64, work, local,
                        [&](const PointSet& p) { code = grid_dt(p); });
  if (discards) *discards += local;
  return code;
}

struct CensusResult {
  int m = 0;
  DiagonalModel model = DiagonalModel::UniformDiagonals;
  std::vector<std::uint64_t> components;  // CC of the diagonal graph, per instance
  double mean_components = 0.0;
  double stddev_components = 0.0;
  /// Mean over instances of (m+1)^2 / CC: grid vertices per component,
  /// isolated vertices included.
  double mean_component_size = 0.0;
  std::uint64_t discards = 0;
};

inline CensusResult component_census(int m, std::uint64_t iterations, DiagonalModel model, std::uint64_t master_seed,
                                     unsigned threads = 0) {
  if (m < 1) throw InvalidInput("component_census: m must be >= 1");
  if (iterations == 0) throw InvalidInput("component_census: iterations must be positive");
  struct Part {
    std::vector<std::uint64_t> cc;
    std::uint64_t discards = 0;
  };
  auto parts = parallel_ranges(iterations, threads, Part{}, [&](std::uint64_t begin, std::uint64_t end, Part& part) {
    for (std::uint64_t k = begin; k < end; ++k) {
      const GridCode code = model == DiagonalModel::UniformDiagonals
                                ? sample_uniform_grid(m, SeedSpec{master_seed, k, 0})
                                : sample_perturbed_grid_dt(m, SeedSpec{master_seed, k, 0}, &part.discards);
      part.cc.push_back(count_components_hat(code));
    }
  });
  CensusResult r;
  r.m = m;
  r.model = model;
  for (const auto& p : parts) {
    r.components.insert(r.components.end(), p.cc.begin(), p.cc.end());
    r.discards += p.discards;
  }
  const double vertices = static_cast<double>((m + 1) * (m + 1));
  double sum = 0.0, size_sum = 0.0;
  for (auto c : r.components) {
    sum += static_cast<double>(c);
    size_sum += vertices / static_cast<double>(c);
  }
  const double count = static_cast<double>(r.components.size());
  r.mean_components = sum / count;
  r.mean_component_size = size_sum / count;
  double ss = 0.0;
  for (auto c : r.components) ss += (static_cast<double>(c) - r.mean_components) * (static_cast<double>(c) - r.mean_components);
  r.stddev_components = count > 1 ? std::sqrt(ss / (count - 1)) : 0.0;
  return r;
}

// ---------------------------------------------------------------------------
// One-sided comparisons used to report the trends.

/// Welch t-test p-value for H1: mean(a) < mean(b).
inline double welch_p_less(double mean_a, double var_a, double n_a, double mean_b, double var_b, double n_b) {
  const double va = var_a / n_a, vb = var_b / n_b;
  const double se = std::sqrt(va + vb);
  if (se == 0.0) return mean_a < mean_b ? 0.0 : 1.0;
  const double t = (mean_a - mean_b) / se;
  const double dof = (va + vb) * (va + vb) / (va * va / (n_a - 1) + vb * vb / (n_b - 1));
  boost::math::students_t dist(dof);
  return boost::math::cdf(dist, t);
}

/// p-value for H1: DT-perturbed diagonal graphs have fewer components.
inline double census_p_value(const CensusResult& dt, const CensusResult& uniform) {
  const double na = static_cast<double>(dt.components.size()), nb = static_cast<double>(uniform.components.size());
  return welch_p_less(dt.mean_components, dt.stddev_components * dt.stddev_components, na, uniform.mean_components,
                      uniform.stddev_components * uniform.stddev_components, nb);
}

/// p-value for H1: mean capped cycle length of `longer` exceeds that of `shorter`.
inline double walk_p_value(const WalkStats& longer, const WalkStats& shorter) {
  return welch_p_less(shorter.mean_capped(), shorter.variance_capped(), static_cast<double>(shorter.closed()),
                      longer.mean_capped(), longer.variance_capped(), static_cast<double>(longer.closed()));
}

}  // namespace degen_dt
