#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "degen_dt/normal.hpp"
#include "degen_dt/orthant.hpp"

using namespace degen_dt;

namespace {

Eigen::MatrixXd random_normals(int k, int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  Eigen::MatrixXd n(k, dim);
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < dim; ++c) n(r, c) = z(rng);
    n.row(r).normalize();
  }
  return n;
}

/// Plain Monte Carlo in the ambient space: fraction of Gaussian vectors on
/// the positive side of every row.
std::pair<double, double> ambient_mc(const Eigen::MatrixXd& normals, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  Eigen::VectorXd x(normals.cols());
  int hits = 0;
  for (int s = 0; s < samples; ++s) {
    for (Eigen::Index c = 0; c < x.size(); ++c) x(c) = z(rng);
    hits += ((normals * x).array() > 0.0).all();
  }
  const double p = static_cast<double>(hits) / samples;
  return {p, std::sqrt(p * (1 - p) / samples)};
}

}  // namespace

TEST(Normal, CdfAndQuantile) {
  EXPECT_DOUBLE_EQ(normal_cdf(0.0), 0.5);
  EXPECT_NEAR(normal_cdf(1.959963984540054), 0.975, 1e-15);
  for (double p : {1e-12, 0.01, 0.3, 0.5, 0.9, 1 - 1e-9}) EXPECT_NEAR(normal_cdf(normal_quantile(p)), p, 1e-12 * std::max(1.0, p / (1 - p)));
  EXPECT_NEAR(normal_pdf(0.0), 1.0 / std::sqrt(2 * std::numbers::pi), 1e-16);
}

TEST(Orthant, SingleHalfspace) {
  const auto r = orthant_probability(random_normals(1, 5, 1), 1e-6);
  EXPECT_EQ(r.probability, 0.5);
}

TEST(Orthant, OrthogonalNormals) {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(4, 6);
  const auto r = orthant_probability(id, 1e-6);
  EXPECT_NEAR(r.probability, 1.0 / 16, 1e-9);  // the integrand is constant
  const auto r3 = orthant_probability(Eigen::MatrixXd::Identity(3, 3), 1e-6);
  EXPECT_NEAR(r3.probability, 1.0 / 8, 1e-9);
}

TEST(Orthant, TwoHalfspacesClosedForm) {
  for (double phi : {0.3, 1.0, 2.0, 2.9}) {
    Eigen::MatrixXd n(2, 3);
    n << 1, 0, 0, std::cos(phi), std::sin(phi), 0;
    const auto r = orthant_probability(n, 1e-7);
    EXPECT_NEAR(r.probability, (std::numbers::pi - phi) / (2 * std::numbers::pi), 5 * 1e-7 + 1e-9) << phi;
  }
}

TEST(Orthant, DegenerateAndBudget) {
  Eigen::MatrixXd n(2, 3);
  n << 1, 0, 0, -1, 0, 0;
  EXPECT_THROW(orthant_probability(n, 1e-4), DegenerateSystem);
  OrthantOptions tight;
  tight.initial_points = 16;
  tight.max_points = 32;
  try {
    orthant_probability(random_normals(5, 8, 3), 1e-12, tight);
    FAIL() << "expected BudgetExceeded";
  } catch (const BudgetExceeded& e) {
    EXPECT_GT(e.best_estimate().probability, 0.0);
    EXPECT_GT(e.best_estimate().standard_error, 1e-12);
  }
}

TEST(Orthant, AgreesWithAmbientMonteCarlo) {
  for (std::uint64_t seed = 10; seed < 14; ++seed) {
    const Eigen::MatrixXd n = random_normals(4, 9, seed);
    const auto qmc = orthant_probability(n, 2e-5);
    const auto [mc, se] = ambient_mc(n, 400000, seed + 100);
    EXPECT_NEAR(qmc.probability, mc, 3.0 * std::hypot(se, qmc.standard_error)) << seed;
    EXPECT_LE(qmc.standard_error, 2e-5);
  }
}

TEST(Orthant, AddingHalfspaceNeverIncreases) {
  const Eigen::MatrixXd n = random_normals(5, 10, 77);
  double prev = 1.0;
  for (int k = 1; k <= 5; ++k) {
    const double p = orthant_probability(n.topRows(k), 1e-5).probability;
    EXPECT_LE(p, prev + 3e-5);
    EXPECT_GE(p, 0.0);
    prev = p;
  }
}

TEST(Orthant, DeterministicForFixedSeed) {
  const Eigen::MatrixXd n = random_normals(4, 8, 5);
  EXPECT_EQ(orthant_probability(n, 1e-4).probability, orthant_probability(n, 1e-4).probability);
}
