#pragma once

// Monte Carlo estimation of Delaunay triangulation distributions under the
// normal perturbation. Iteration i always draws from the stream derived from
// (master_seed, i, attempt), so reports are identical for any worker count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "degen_dt/analytic.hpp"
#include "degen_dt/baselines.hpp"
#include "degen_dt/parallel.hpp"
#include "degen_dt/pointsets.hpp"
#include "degen_dt/triangulate.hpp"

namespace degen_dt {

struct SimulationOptions {
  unsigned threads = 0;
  double scale_factor = 0.001;
  std::size_t top_k = 0;                 // 0 keeps every entry in the report
  std::size_t max_distinct = 1'000'000;  // histogram cap; overflow goes to other_count
  int max_attempts = 64;
};

struct DistributionEntry {
  std::string code;  // to_key() of the GridCode / PolygonCode
  std::uint64_t count = 0;
  double frequency = 0.0;
  std::optional<OrthantResult> analytic;
};

struct ClassEntry {
  std::string representative;  // canonical_class key
  int orbit_size = 0;          // triangulations isomorphic to the representative
  std::uint64_t count = 0;
  double frequency = 0.0;
};

struct DistributionReport {
  PointSetKind kind = PointSetKind::Grid;
  int parameter = 0;
  std::uint64_t iterations = 0;
  std::uint64_t discards = 0;
  std::uint64_t distinct = 0;     // distinct codes observed (up to max_distinct)
  std::uint64_t other_count = 0;  // samples whose code did not fit the histogram
  std::vector<DistributionEntry> entries;  // by count desc, then code
  std::vector<ClassEntry> classes;         // polygons only

  const DistributionEntry* find(const std::string& code) const {
    for (const auto& e : entries)
      if (e.code == code) return &e;
    return nullptr;
  }
};

namespace detail {

struct Tally {
  std::unordered_map<std::string, std::uint64_t> counts;
  std::uint64_t discards = 0;
  std::uint64_t other = 0;
};

/// Perturbs `base` for iteration `index`, resampling on exact degeneracy.
template <typename Fn>
void run_iteration(const PointSet& base, const PerturbationParams& params, std::uint64_t master_seed, std::uint64_t index,
                   int max_attempts, PointSet& work, std::uint64_t& discards, Fn&& fn) {
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    perturb_into(base, params, SeedSpec{master_seed, index, static_cast<std::uint64_t>(attempt)}, work);
    try {
      fn(work);
      return;
    } catch (const DegenerateConfiguration&) {
      ++discards;
    }
  }
  throw std::runtime_error("simulation: too many degenerate resamples in one iteration");
}

inline DistributionReport finish_report(PointSetKind kind, int parameter, std::uint64_t iterations,
                                        std::vector<Tally>& parts, const SimulationOptions& opts) {
  DistributionReport report;
  report.kind = kind;
  report.parameter = parameter;
  report.iterations = iterations;
  std::map<std::string, std::uint64_t> merged;
  for (auto& part : parts) {
    report.discards += part.discards;
    report.other_count += part.other;
    for (const auto& [key, count] : part.counts) merged[key] += count;
  }
  // Per-worker caps may admit more keys than the global cap; fold the excess
  // deterministically (lowest counts, then largest keys, go to other_count).
  std::vector<DistributionEntry> entries;
  entries.reserve(merged.size());
  for (const auto& [key, count] : merged) {
    entries.push_back({key, count, static_cast<double>(count) / static_cast<double>(iterations), std::nullopt});
  }
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return a.count != b.count ? a.count > b.count : a.code < b.code;
  });
  if (entries.size() > opts.max_distinct) {
    for (std::size_t i = opts.max_distinct; i < entries.size(); ++i) report.other_count += entries[i].count;
    entries.resize(opts.max_distinct);
  }
  report.distinct = entries.size();
  report.entries = std::move(entries);
  return report;
}

inline void keep_top_k(DistributionReport& report, std::size_t top_k) {
  if (top_k > 0 && report.entries.size() > top_k) report.entries.resize(top_k);
}

inline void add_to_tally(Tally& t, std::string key, std::size_t max_distinct) {
  auto it = t.counts.find(key);
  if (it != t.counts.end()) {
    ++it->second;
  } else if (t.counts.size() < max_distinct) {
    t.counts.emplace(std::move(key), 1);
  } else {
    ++t.other;
  }
}

inline int orbit_size(const PolygonCode& code) {
  std::set<PolygonCode> orbit;
  for (int shift = 0; shift < code.n; ++shift) {
    orbit.insert(relabel(code, shift, false));
    orbit.insert(relabel(code, shift, true));
  }
  return static_cast<int>(orbit.size());
}

}  // namespace detail

inline DistributionReport estimate_grid_distribution(int m, std::uint64_t iterations, std::uint64_t master_seed,
                                                     const SimulationOptions& opts = {}) {
  if (m < 1) throw InvalidInput("estimate_grid_distribution: m must be >= 1");
  if (iterations == 0) throw InvalidInput("estimate_grid_distribution: iterations must be positive");
  const PointSet base = make_grid(m);
  const PerturbationParams params{opts.scale_factor, min_pairwise_distance(base)};
  auto parts = parallel_ranges(iterations, opts.threads, detail::Tally{},
                               [&](std::uint64_t begin, std::uint64_t end, detail::Tally& tally) {
                                 PointSet work;
                                 for (std::uint64_t i = begin; i < end; ++i) {
                                   detail::run_iteration(base, params, master_seed, i, opts.max_attempts, work, tally.discards,
                                                         [&](const PointSet& p) {
                                                           detail::add_to_tally(tally, to_key(grid_dt(p)), opts.max_distinct);
                                                         });
                                 }
                               });
  DistributionReport report = detail::finish_report(PointSetKind::Grid, m, iterations, parts, opts);
  detail::keep_top_k(report, opts.top_k);
  return report;
}

inline DistributionReport estimate_polygon_distribution(int n, std::uint64_t iterations, std::uint64_t master_seed,
                                                        const SimulationOptions& opts = {}) {
  if (n < 3) throw InvalidInput("estimate_polygon_distribution: n must be >= 3");
  if (iterations == 0) throw InvalidInput("estimate_polygon_distribution: iterations must be positive");
  const PointSet base = make_polygon(n);
  const PerturbationParams params{opts.scale_factor, min_pairwise_distance(base)};
  auto parts = parallel_ranges(iterations, opts.threads, detail::Tally{},
                               [&](std::uint64_t begin, std::uint64_t end, detail::Tally& tally) {
                                 PointSet work;
                                 PolygonFlipper flipper;
                                 for (std::uint64_t i = begin; i < end; ++i) {
                                   detail::run_iteration(base, params, master_seed, i, opts.max_attempts, work, tally.discards,
                                                         [&](const PointSet& p) {
                                                           detail::add_to_tally(tally, to_key(flipper.run(p).code), opts.max_distinct);
                                                         });
                                 }
                               });
  DistributionReport report = detail::finish_report(PointSetKind::Polygon, n, iterations, parts, opts);

  std::map<std::string, ClassEntry> classes;
  for (const auto& e : report.entries) {
    const PolygonCode code = polygon_code_from_key(n, e.code);
    const std::string rep = to_key(canonical_class(code));
    auto [it, inserted] = classes.try_emplace(rep);
    if (inserted) {
      it->second.representative = rep;
      it->second.orbit_size = detail::orbit_size(code);
    }
    it->second.count += e.count;
  }
  for (auto& [rep, c] : classes) {
    c.frequency = static_cast<double>(c.count) / static_cast<double>(iterations);
    report.classes.push_back(c);
  }
  std::sort(report.classes.begin(), report.classes.end(), [](const auto& a, const auto& b) {
    return a.count != b.count ? a.count > b.count : a.representative < b.representative;
  });
  detail::keep_top_k(report, opts.top_k);
  return report;
}

/// Attaches the first-order analytic probability to every grid entry (m = 2).
inline void attach_grid2_analytic(DistributionReport& report, double target_se = 2e-5) {
  if (report.kind != PointSetKind::Grid || report.parameter != 2) throw InvalidInput("attach_grid2_analytic: needs a 2 x 2 grid report");
  for (auto& e : report.entries) e.analytic = orthant_prob(grid2_halfspaces(grid_code_from_key(e.code)), target_se);
}

inline void attach_polygon_analytic(DistributionReport& report, double target_se = 2e-5) {
  if (report.kind != PointSetKind::Polygon) throw InvalidInput("attach_polygon_analytic: needs a polygon report");
  std::map<std::string, OrthantResult> table;
  for (const auto& p : polygon_distribution(report.parameter, target_se)) table[to_key(p.code)] = p.result;
  for (auto& e : report.entries) e.analytic = table.at(e.code);
}

/// Total variation distance between empirical frequencies and a reference
/// distribution keyed by code; codes missing on either side count in full.
inline double total_variation(const DistributionReport& report, const std::map<std::string, double>& reference) {
  double tv = 0.0;
  std::set<std::string> seen;
  for (const auto& e : report.entries) {
    const auto it = reference.find(e.code);
    tv += std::fabs(e.frequency - (it == reference.end() ? 0.0 : it->second));
    seen.insert(e.code);
  }
  for (const auto& [code, p] : reference) {
    if (!seen.count(code)) tv += p;
  }
  return 0.5 * tv;
}

// ---------------------------------------------------------------------------

struct TriangleEntry {
  Triangle vertices{};
  std::uint64_t count = 0;
  double frequency = 0.0;
  Rational uniform_baseline;
};

struct TriangleReport {
  int n = 0;
  std::uint64_t iterations = 0;
  std::uint64_t discards = 0;
  std::vector<TriangleEntry> entries;  // sorted by vertex triple

  const TriangleEntry* find(int i, int j, int k) const {
    for (const auto& e : entries)
      if (e.vertices == Triangle{i, j, k}) return &e;
    return nullptr;
  }
};

inline TriangleReport estimate_triangle_frequencies(int n, std::uint64_t iterations, std::uint64_t master_seed,
                                                    const SimulationOptions& opts = {}) {
  if (n < 3) throw InvalidInput("estimate_triangle_frequencies: n must be >= 3");
  if (iterations == 0) throw InvalidInput("estimate_triangle_frequencies: iterations must be positive");
  const PointSet base = make_polygon(n);
  const PerturbationParams params{opts.scale_factor, min_pairwise_distance(base)};
  struct Part {
    std::unordered_map<std::uint32_t, std::uint64_t> counts;
    std::uint64_t discards = 0;
  };
  auto pack = [](const Triangle& t) {
    return static_cast<std::uint32_t>((t[0] << 20) | (t[1] << 10) | t[2]);
  };
  auto parts = parallel_ranges(iterations, opts.threads, Part{}, [&](std::uint64_t begin, std::uint64_t end, Part& part) {
    PointSet work;
    PolygonFlipper flipper;
    for (std::uint64_t i = begin; i < end; ++i) {
      detail::run_iteration(base, params, master_seed, i, opts.max_attempts, work, part.discards, [&](const PointSet& p) {
        for (const auto& tri : flipper.run(p).triangulation.triangles) ++part.counts[pack(tri)];
      });
    }
  });
  TriangleReport report;
  report.n = n;
  report.iterations = iterations;
  std::map<std::uint32_t, std::uint64_t> merged;
  for (const auto& part : parts) {
    report.discards += part.discards;
    for (const auto& [key, count] : part.counts) merged[key] += count;
  }
  for (const auto& [key, count] : merged) {
    TriangleEntry e;
    e.vertices = {static_cast<int>(key >> 20), static_cast<int>((key >> 10) & 1023U), static_cast<int>(key & 1023U)};
    e.count = count;
    e.frequency = static_cast<double>(count) / static_cast<double>(iterations);
    e.uniform_baseline = uniform_triangle_prob(n, e.vertices[0], e.vertices[1], e.vertices[2]);
    report.entries.push_back(std::move(e));
  }
  return report;
}

}  // namespace degen_dt
