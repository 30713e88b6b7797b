// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "degen_dt/degen_dt.hpp"
#include "oracle/oracles.hpp"

using namespace degen_dt;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void verdict(int id, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  failures += !ok;
}

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

constexpr std::uint64_t kIters = 1'000'000;

void criterion1() {
  const auto t0 = Clock::now();
  const auto r = estimate_grid_distribution(1, kIters, 101);
  const double secs = seconds_since(t0);
  bool ok = r.entries.size() == 2 && secs <= 60.0;
  double worst = 0.0;
  for (const auto& e : r.entries) worst = std::max(worst, std::fabs(e.frequency - 0.5));
  ok = ok && worst <= 0.002;
  verdict(1, ok, fmt("m=1 max |f-0.5| = %.5f over 2 codes, %.1f s", worst, secs));
}

// Sorted descending; group sizes 4/8/4.
std::vector<double> grid2_sorted(const std::vector<GridProbability>& probs) {
  std::vector<double> v;
  for (const auto& p : probs) v.push_back(p.result.probability);
  std::sort(v.rbegin(), v.rend());
  return v;
}

void criterion2() {
  const auto t0 = Clock::now();
  const auto probs = grid2_distribution(2e-5);
  const double secs = seconds_since(t0);
  const auto v = grid2_sorted(probs);
  const double expected[3] = {0.08422, 0.06088, 0.04401};
  const int begin[3] = {0, 4, 12}, end[3] = {4, 12, 16};
  bool ok = v.size() == 16 && secs <= 300.0;
  double mean[3] = {0, 0, 0}, worst = 0.0, spread = 0.0;
  for (int g = 0; g < 3; ++g) {
    for (int k = begin[g]; k < end[g]; ++k) {
      mean[g] += v[static_cast<std::size_t>(k)] / (end[g] - begin[g]);
      worst = std::max(worst, std::fabs(v[static_cast<std::size_t>(k)] - expected[g]));
    }
    spread = std::max(spread, v[static_cast<std::size_t>(begin[g])] - v[static_cast<std::size_t>(end[g] - 1)]);
  }
  // Levels must be separated by more than their internal spread.
  ok = ok && worst <= 1e-3 && v[3] - v[4] > spread && v[11] - v[12] > spread;
  const double total = 4 * mean[0] + 8 * mean[1] + 4 * mean[2];
  ok = ok && std::fabs(total - 1.0) <= 2e-3;
  verdict(2, ok,
          fmt("L/M/S = %.5f/%.5f/%.5f (max dev %.2e), ", mean[0], mean[1], mean[2], worst) +
              fmt("4L+8M+4S = %.5f, %.1f s", total, secs));
}

void criterion3() {
  auto r = estimate_grid_distribution(2, kIters, 103);
  attach_grid2_analytic(r);
  std::map<std::string, double> ref;
  for (const auto& p : grid2_distribution()) ref[to_key(p.code)] = p.result.probability;
  const double tv = total_variation(r, ref);
  const double ratio = r.entries.front().frequency / r.entries.back().frequency;
  const bool ok = r.entries.size() == 16 && tv < 0.01 && std::fabs(ratio - 1.91) <= 0.1;
  verdict(3, ok, fmt("m=2 TV = %.5f, max/min = %.3f", tv, ratio));
}

void criterion4() {
  bool ok = true;
  std::string detail;
  const double expected[3] = {1.0, 0.5, 0.2};
  for (int n = 3; n <= 5; ++n) {
    const auto r = estimate_polygon_distribution(n, kIters, 104);
    double worst = 0.0;
    for (const auto& e : r.entries) worst = std::max(worst, std::fabs(e.frequency - expected[n - 3]));
    const std::size_t want = n == 3 ? 1U : (n == 4 ? 2U : 5U);
    ok = ok && r.entries.size() == want && worst <= (n == 3 ? 0.0 : 0.005);
    detail += fmt("n=%.0f max dev %.5f; ", n, worst);
  }
  verdict(4, ok, detail);
}

void criterion5() {
  const auto probs = polygon_distribution(6);
  double sum = 0.0;
  bool girard = true;
  std::map<std::string, double> ref;
  for (const auto& p : probs) {
    sum += p.result.probability;
    girard = girard && p.result.method == OrthantMethod::Girard;
    ref[to_key(p.code)] = p.result.probability;
  }
  const auto r = estimate_polygon_distribution(6, kIters, 105);
  double worst = 0.0;
  for (const auto& e : r.entries) worst = std::max(worst, std::fabs(e.frequency - ref.at(e.code)));
  const bool uniform_exact = Rational(1) / Rational(catalan(4)) == Rational(1, 14) &&
                             enumerate_polygon_triangulations(6).size() == 14;
  const bool ok = probs.size() == 14 && girard && std::fabs(sum - 1.0) <= 1e-6 && r.entries.size() == 14 &&
                  worst <= 0.005 && uniform_exact;
  verdict(5, ok, fmt("hexagon sum = %.9f, max |emp - analytic| = %.5f, uniform 1/14 ", sum, worst) +
                     (uniform_exact ? "exact" : "WRONG"));
}

void criterion6() {
  const auto probs = polygon_distribution(7);
  double sum = 0.0;
  std::map<std::string, std::vector<OrthantResult>> classes;
  std::map<std::string, double> ref;
  for (const auto& p : probs) {
    sum += p.result.probability;
    classes[to_key(canonical_class(p.code))].push_back(p.result);
    ref[to_key(p.code)] = p.result.probability;
  }
  // Each member against the mean of the rest of its class.
  double worst_z = 0.0;
  for (const auto& [rep, members] : classes) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      double m = 0.0, v = 0.0;
      for (std::size_t j = 0; j < members.size(); ++j) {
        if (j == i) continue;
        m += members[j].probability;
        v += members[j].standard_error * members[j].standard_error;
      }
      const double k = static_cast<double>(members.size() - 1);
      m /= k;
      const double se = std::sqrt(members[i].standard_error * members[i].standard_error + v / (k * k));
      const double diff = std::fabs(members[i].probability - m);
      worst_z = std::max(worst_z, se > 0 ? diff / se : (diff > 0 ? INFINITY : 0.0));
    }
  }
  const auto r = estimate_polygon_distribution(7, kIters, 106);
  double worst = 0.0;
  for (const auto& e : r.entries) worst = std::max(worst, std::fabs(e.frequency - ref.at(e.code)));
  const bool ok = probs.size() == 42 && classes.size() == 4 && std::fabs(sum - 1.0) <= 5e-3 && worst_z <= 2.0 &&
                  r.entries.size() == 42 && worst <= 0.005;
  verdict(6, ok, fmt("heptagon sum = %.5f, worst in-class deviation = %.2f SE, max |emp - analytic| = %.5f", sum,
                     worst_z, worst));
}

void criterion7() {
  const auto r = estimate_polygon_distribution(8, kIters, 107);
  const double uniform = 1.0 / static_cast<double>(catalan(6));
  const double top = r.entries.front().frequency, low = r.entries.back().frequency;
  const bool ok = top >= 3.5 * uniform && top >= 10.0 * low;
  verdict(7, ok, fmt("octagon max = %.5f (%.2f x 1/C6), max/min = %.1f over %.0f codes", top, top / uniform, top / low,
                     static_cast<double>(r.entries.size())));
}

void criterion8() {
  bool ok = true;
  for (int n : {3, 5, 7, 8, 12, 20}) {
    const auto r = estimate_triangle_frequencies(n, 20000, 108);
    std::uint64_t total = 0;
    for (const auto& e : r.entries) total += e.count;
    ok = ok && total == static_cast<std::uint64_t>(n - 2) * r.iterations;
    Rational base = 0;
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j)
        for (int k = j + 1; k <= n; ++k) base += uniform_triangle_prob(n, i, j, k);
    ok = ok && base == n - 2;
  }
  // Arcs (2,2,3): triangle 1-3-5. Arcs (1,3,3): triangle 1-2-5.
  const bool r223 = uniform_triangle_prob(7, 1, 3, 5) == Rational(2, 42);
  const bool r133 = uniform_triangle_prob(7, 1, 2, 5) == Rational(4, 42);
  verdict(8, ok && r223 && r133,
          std::string("sum of frequencies = n-2 for n in {3,5,7,8,12,20}; r(2,2,3) = 2/42 ") + (r223 ? "ok" : "WRONG") +
              ", r(1,3,3) = 4/42 " + (r133 ? "ok" : "WRONG"));
}

void criterion9() {
  const auto t0 = Clock::now();
  const auto dt = component_census(40, 100, DiagonalModel::DTPerturbed, 109);
  const auto ut = component_census(40, 100, DiagonalModel::UniformDiagonals, 109);
  const double p_census = census_p_value(dt, ut);
  const auto wd = walk_statistics(DiagonalModel::DTPerturbed, 100000, 40, 109);
  const auto wu = walk_statistics(DiagonalModel::UniformDiagonals, 100000, 40, 109);
  const double p_walk = walk_p_value(wd, wu);
  const double secs = seconds_since(t0);
  const bool ok = dt.mean_components < ut.mean_components && p_census < 0.01 && wd.mean_capped() > wu.mean_capped() &&
                  p_walk < 0.01 && secs <= 1800.0;
  verdict(9, ok,
          fmt("CC DT %.1f vs UT %.1f (p = %.2e); ", dt.mean_components, ut.mean_components, p_census) +
              fmt("capped length DT %.3f vs UT %.3f (p = %.2e), %.0f s", wd.mean_capped(), wu.mean_capped(), p_walk, secs));
}

void criterion10() {
  int bad = 0;
  for (std::uint64_t v = 0; v < 512; ++v) {
    const GridCode c = grid_code_from_index(3, v);
    bad += count_components_hat(c) != count_components_G(c) + 1;
    bad += count_components_hat(c) != static_cast<std::size_t>(oracle::diagonal_components(c));
  }
  std::mt19937_64 rng(110);
  for (int t = 0; t < 10000; ++t) {
    GridCode c(10);
    for (auto& b : c.bits) b = static_cast<std::uint8_t>(rng() & 1U);
    bad += count_components_hat(c) != count_components_G(c) + 1;
    bad += count_components_hat(c) != static_cast<std::size_t>(oracle::diagonal_components(c));
  }
  verdict(10, bad == 0, fmt("%.0f violations over 512 codes at m=3 and 10^4 at m=10", bad));
}

void criterion11() {
  CornerIntegralSpec spec;
  const double p4 = corner_probability(spec).probability;
  bool ok = std::fabs(p4 - 0.5) <= 1e-6;
  std::string detail = fmt("p4 = %.8f; ", p4);

  double worst_mc = 0.0;
  for (int n : {8, 12, 16}) {
    spec.n = n;
    const double p = corner_probability(spec).probability;
    const auto r = estimate_triangle_frequencies(n, 200000, 111);
    worst_mc = std::max(worst_mc, std::fabs(p - r.find(1, 2, 3)->frequency));
  }
  ok = ok && worst_mc <= 0.01;
  detail += fmt("max |p - MC| on {8,12,16} = %.4f; ", worst_mc);

  double lo = 1.0, hi = 0.0;
  for (int n : {10, 20, 50, 100}) {
    spec.n = n;
    const double p = corner_probability(spec).probability;
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  ok = ok && lo > 0.25 && hi - lo < 0.05;
  detail += fmt("p on {10,20,50,100} in [%.4f, %.4f]; ", lo, hi);

  bool exact = true;
  for (int n = 4; n <= 60; ++n)
    exact = exact && uniform_corner_prob(n) == Rational(catalan(n - 3)) / Rational(catalan(n - 2));
  const double r50 = static_cast<double>(uniform_corner_prob(50));
  ok = ok && exact && std::fabs(r50 - 0.25) < 0.01 && r50 < static_cast<double>(uniform_corner_prob(10));
  detail += fmt("r_50 = %.5f", r50) + (exact ? " (exact Catalan ratio)" : " (Catalan ratio WRONG)");
  verdict(11, ok, detail);
}

void criterion12() {
  oracle::AdversarialSource src(112);
  int mismatches = 0, cases = 0;
  while (cases < 100000) {
    auto q = src.cocircular();
    int o = oracle::orient(q[0], q[1], q[2]);
    mismatches += static_cast<int>(orient2d(q[0], q[1], q[2])) != o;
    ++cases;
    if (o != 0) {
      if (o < 0) std::swap(q[1], q[2]);
      mismatches += static_cast<int>(incircle(q[0], q[1], q[2], q[3])) != oracle::incircle(q[0], q[1], q[2], q[3]);
      ++cases;
    }
    const auto l = src.collinear();
    mismatches += static_cast<int>(orient2d(l[0], l[1], l[2])) != oracle::orient(l[0], l[1], l[2]);
    ++cases;
  }
  verdict(12, mismatches == 0, fmt("%.0f mismatches against exact rationals over %.0f predicate calls", mismatches, cases));
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  criterion11();
  criterion12();
  std::printf("%d of 12 criteria failed, %.0f s total\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
