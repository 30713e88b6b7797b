#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace degen_dt {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

/// Golub-Welsch: nodes and weights from the symmetric Jacobi matrix.
inline QuadratureRule golub_welsch(const std::vector<double>& off_diagonal, double total_mass) {
  const Eigen::Index n = static_cast<Eigen::Index>(off_diagonal.size()) + 1;
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    jacobi(k, k + 1) = jacobi(k + 1, k) = off_diagonal[static_cast<std::size_t>(k)];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  QuadratureRule rule;
  for (Eigen::Index k = 0; k < n; ++k) {
    rule.nodes.push_back(eig.eigenvalues()(k));
    const double v0 = eig.eigenvectors()(0, k);
    rule.weights.push_back(total_mass * v0 * v0);
  }
  return rule;
}

}  // namespace detail

/// Gauss-Legendre on [-1, 1].
inline QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  std::vector<double> b;
  for (int k = 1; k < n; ++k) b.push_back(k / std::sqrt(4.0 * k * k - 1.0));
  return detail::golub_welsch(b, 2.0);
}

/// Gauss-Hermite for the standard normal weight; weights sum to 1.
inline QuadratureRule gauss_hermite_normal(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite_normal: n must be >= 1");
  std::vector<double> b;
  for (int k = 1; k < n; ++k) b.push_back(std::sqrt(static_cast<double>(k)));
  return detail::golub_welsch(b, 1.0);
}

}  // namespace degen_dt
