#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "degen_dt/simulate.hpp"

using namespace degen_dt;

namespace {

std::uint64_t total_count(const DistributionReport& r) {
  std::uint64_t s = r.other_count;
  for (const auto& e : r.entries) s += e.count;
  return s;
}

bool same_entries(const DistributionReport& a, const DistributionReport& b) {
  if (a.entries.size() != b.entries.size() || a.discards != b.discards || a.other_count != b.other_count) return false;
  for (std::size_t i = 0; i < a.entries.size(); ++i)
    if (a.entries[i].code != b.entries[i].code || a.entries[i].count != b.entries[i].count) return false;
  return true;
}

}  // namespace

TEST(GridDistribution, SingleCellIsFair) {
  const auto r = estimate_grid_distribution(1, 200000, 7);
  ASSERT_EQ(r.entries.size(), 2U);
  for (const auto& e : r.entries) EXPECT_NEAR(e.frequency, 0.5, 0.005);
  EXPECT_EQ(total_count(r), r.iterations);
}

TEST(GridDistribution, DeterministicAcrossWorkerCounts) {
  SimulationOptions one, four;
  one.threads = 1;
  four.threads = 4;
  const auto a = estimate_grid_distribution(2, 20000, 99, one);
  const auto b = estimate_grid_distribution(2, 20000, 99, four);
  const auto c = estimate_grid_distribution(2, 20000, 99, one);
  EXPECT_TRUE(same_entries(a, b));
  EXPECT_TRUE(same_entries(a, c));
  EXPECT_FALSE(same_entries(a, estimate_grid_distribution(2, 20000, 100, one)));
}

TEST(GridDistribution, FrequenciesSumToOneAndDiscardsAreRare) {
  const auto r = estimate_grid_distribution(2, 100000, 5);
  double f = 0.0;
  for (const auto& e : r.entries) f += e.frequency;
  EXPECT_NEAR(f, 1.0, 1e-12);
  EXPECT_EQ(r.entries.size(), 16U);
  EXPECT_LT(static_cast<double>(r.discards), 1e-4 * static_cast<double>(r.iterations));
}

TEST(GridDistribution, TopKAndHistogramCap) {
  SimulationOptions opts;
  opts.top_k = 5;
  const auto r = estimate_grid_distribution(3, 20000, 1, opts);
  EXPECT_EQ(r.entries.size(), 5U);
  for (std::size_t i = 1; i < r.entries.size(); ++i) EXPECT_GE(r.entries[i - 1].count, r.entries[i].count);

  SimulationOptions capped;
  capped.max_distinct = 10;
  capped.threads = 1;
  const auto c = estimate_grid_distribution(3, 20000, 1, capped);
  EXPECT_EQ(c.entries.size(), 10U);
  EXPECT_EQ(total_count(c), c.iterations);
  EXPECT_GT(c.other_count, 0U);
}

TEST(GridDistribution, MatchesAnalyticForTwoByTwo) {
  auto r = estimate_grid_distribution(2, 300000, 11);
  attach_grid2_analytic(r);
  std::map<std::string, double> ref;
  for (const auto& e : r.entries) {
    ASSERT_TRUE(e.analytic.has_value());
    ref[e.code] = e.analytic->probability;
    const double se = std::sqrt(e.analytic->probability * (1 - e.analytic->probability) / 300000.0);
    EXPECT_NEAR(e.frequency, e.analytic->probability, 5 * se) << e.code;
  }
  EXPECT_LT(total_variation(r, ref), 0.01);
}

TEST(PolygonDistribution, SquareAndClasses) {
  const auto r = estimate_polygon_distribution(4, 100000, 3);
  ASSERT_EQ(r.entries.size(), 2U);
  for (const auto& e : r.entries) EXPECT_NEAR(e.frequency, 0.5, 0.005);
  ASSERT_EQ(r.classes.size(), 1U);
  EXPECT_EQ(r.classes[0].orbit_size, 2);
  EXPECT_EQ(r.classes[0].count, r.iterations);

  const auto h = estimate_polygon_distribution(7, 50000, 3);
  EXPECT_EQ(h.classes.size(), 4U);
  int orbits = 0;
  for (const auto& c : h.classes) orbits += c.orbit_size;
  EXPECT_EQ(orbits, 42);
}

TEST(PolygonDistribution, HexagonAgreesWithGirard) {
  auto r = estimate_polygon_distribution(6, 200000, 8);
  attach_polygon_analytic(r);
  ASSERT_EQ(r.entries.size(), 14U);
  for (const auto& e : r.entries) EXPECT_NEAR(e.frequency, e.analytic->probability, 0.005) << e.code;
}

TEST(PolygonDistribution, Deterministic) {
  SimulationOptions one, three;
  one.threads = 1;
  three.threads = 3;
  EXPECT_TRUE(same_entries(estimate_polygon_distribution(8, 5000, 4, one), estimate_polygon_distribution(8, 5000, 4, three)));
}

TEST(TriangleFrequencies, SumIsTriangleCount) {
  for (int n : {3, 5, 8, 13}) {
    const auto r = estimate_triangle_frequencies(n, 3000, 21);
    std::uint64_t total = 0;
    for (const auto& e : r.entries) {
      total += e.count;
      EXPECT_EQ(e.uniform_baseline, uniform_triangle_prob(n, e.vertices[0], e.vertices[1], e.vertices[2]));
    }
    EXPECT_EQ(total, static_cast<std::uint64_t>(n - 2) * r.iterations);
  }
}

TEST(TriangleFrequencies, HeptagonRotationSymmetry) {
  const std::uint64_t iters = 100000;
  const auto r = estimate_triangle_frequencies(7, iters, 12);
  // Orbit of the corner triangle under rotation.
  std::vector<double> f;
  for (int s = 0; s < 7; ++s) {
    std::array<int, 3> t{1 + s, 1 + (s + 1) % 7, 1 + (s + 2) % 7};
    std::sort(t.begin(), t.end());
    const auto* e = r.find(t[0], t[1], t[2]);
    ASSERT_NE(e, nullptr);
    f.push_back(e->frequency);
  }
  double mean = 0.0;
  for (double x : f) mean += x / 7.0;
  const double se = std::sqrt(mean * (1 - mean) / static_cast<double>(iters));
  for (double x : f) EXPECT_NEAR(x, mean, 3 * se);
}

TEST(Simulation, RejectsBadArguments) {
  EXPECT_THROW(estimate_grid_distribution(0, 10, 1), InvalidInput);
  EXPECT_THROW(estimate_grid_distribution(2, 0, 1), InvalidInput);
  EXPECT_THROW(estimate_polygon_distribution(2, 10, 1), InvalidInput);
  EXPECT_THROW(estimate_triangle_frequencies(2, 10, 1), InvalidInput);
}
