#pragma once

#include <array>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "degen_dt/rng.hpp"
#include "degen_dt/triangulate.hpp"

namespace degen_dt {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// C_0..C_k by the convolution recurrence; grows on demand.
class CatalanTable {
 public:
  BigInt operator()(int k) {
    if (k < 0) throw InvalidInput("catalan: k must be >= 0");
    std::lock_guard lock(mutex_);
    while (static_cast<int>(values_.size()) <= k) {
      const std::size_t i = values_.size();
      BigInt next = 0;
      for (std::size_t j = 0; j < i; ++j) next += values_[j] * values_[i - 1 - j];
      values_.push_back(next);
    }
    return values_[static_cast<std::size_t>(k)];
  }

 private:
  std::mutex mutex_;
  std::vector<BigInt> values_{BigInt(1)};
};

inline BigInt catalan(int k) {
  static CatalanTable table;
  return table(k);
}

/// Arc lengths (number of polygon sides) between consecutive vertices of i<j<k.
inline std::array<int, 3> triangle_arcs(int n, int i, int j, int k) {
  if (!(1 <= i && i < j && j < k && k <= n)) throw InvalidInput("triangle labels must satisfy 1 <= i < j < k <= n");
  return {j - i, k - j, n - (k - i)};
}

/// Probability that triangle ijk appears in a uniformly random triangulation.
inline Rational uniform_triangle_prob(int n, int i, int j, int k) {
  const auto [a, b, c] = triangle_arcs(n, i, j, k);
  const BigInt num = catalan(a - 1) * catalan(b - 1) * catalan(c - 1);
  return Rational(num, catalan(n - 2));
}

/// Corner-triangle baseline C_{n-3} / C_{n-2}.
inline Rational uniform_corner_prob(int n) { return uniform_triangle_prob(n, 1, 2, 3); }

inline GridCode sample_uniform_grid(int m, const SeedSpec& seed) {
  if (m < 1) throw InvalidInput("sample_uniform_grid: m must be >= 1");
  StreamRng rng(seed, /*domain=*/1);
  GridCode code(m);
  for (auto& b : code.bits) b = rng.coin() ? 1 : 0;
  return code;
}

}  // namespace degen_dt
