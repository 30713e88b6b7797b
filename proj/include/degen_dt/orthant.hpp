#pragma once

// Gaussian orthant probabilities P(N g > 0) for g ~ N(0, I), via the
// separation-of-variables transform on the Cholesky factor of the Gram
// matrix N N^T, integrated with randomized Richtmyer lattice points.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "degen_dt/normal.hpp"
#include "degen_dt/rng.hpp"

namespace degen_dt {

enum class OrthantMethod { Exact, Girard, QuasiMonteCarlo, ClosedForm4D };

inline const char* to_string(OrthantMethod m) {
  switch (m) {
    case OrthantMethod::Exact: return "Exact";
    case OrthantMethod::Girard: return "Girard";
    case OrthantMethod::QuasiMonteCarlo: return "QuasiMonteCarlo";
    case OrthantMethod::ClosedForm4D: return "ClosedForm4D";
  }
  return "?";
}

struct OrthantResult {
  double probability = 0.0;
  double standard_error = 0.0;
  OrthantMethod method = OrthantMethod::QuasiMonteCarlo;
};

class DegenerateSystem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, OrthantResult best) : std::runtime_error(what), best_(best) {}
  const OrthantResult& best_estimate() const { return best_; }

 private:
  OrthantResult best_;
};

struct OrthantOptions {
  int replicates = 16;
  std::uint64_t initial_points = 1024;   // per replicate
  std::uint64_t max_points = 1ULL << 21;  // per replicate
  std::uint64_t seed = 0x5EEDULL;
};

namespace detail {

inline std::vector<double> richtmyer_generators(int count) {
  std::vector<double> gens;
  for (int candidate = 2; static_cast<int>(gens.size()) < count; ++candidate) {
    bool prime = true;
    for (int d = 2; d * d <= candidate; ++d) {
      if (candidate % d == 0) {
        prime = false;
        break;
      }
    }
    if (prime) {
      const double s = std::sqrt(static_cast<double>(candidate));
      gens.push_back(s - std::floor(s));
    }
  }
  return gens;
}

/// Lower-triangular Cholesky factor of the Gram matrix; throws if rank-deficient.
inline Eigen::MatrixXd gram_cholesky(const Eigen::MatrixXd& normals) {
  const Eigen::MatrixXd gram = normals * normals.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() <= 1e-12 * std::max(1.0, eig.eigenvalues().maxCoeff())) {
    throw DegenerateSystem("halfspace normals are linearly dependent");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  return llt.matrixL();
}

/// Separation-of-variables integrand on [0,1)^(k-1).
inline double orthant_integrand(const Eigen::MatrixXd& chol, const double* u, double* y) {
  const Eigen::Index k = chol.rows();
  double f = 1.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < i; ++j) s += chol(i, j) * y[j];
    // w_i > 0  <=>  y_i > -s / L_ii; mass of that tail is Phi(s / L_ii).
    const double width = normal_cdf(s / chol(i, i));
    f *= width;
    if (f == 0.0) return 0.0;
    if (i + 1 < k) y[i] = -normal_quantile(width * (1.0 - u[i]));
  }
  return f;
}

}  // namespace detail

/// Orthant probability for the rows of `normals` (k x dim, full row rank).
inline OrthantResult orthant_probability(const Eigen::MatrixXd& normals, double target_se,
                                         const OrthantOptions& opts = {}) {
  const Eigen::Index k = normals.rows();
  if (k < 1) throw std::invalid_argument("orthant_probability: empty system");
  const Eigen::MatrixXd chol = detail::gram_cholesky(normals);
  if (k == 1) return {0.5, 0.0, OrthantMethod::QuasiMonteCarlo};

  const int dims = static_cast<int>(k - 1);
  const auto gens = detail::richtmyer_generators(dims);
  const int reps = std::max(2, opts.replicates);
  std::vector<std::vector<double>> shifts(static_cast<std::size_t>(reps), std::vector<double>(static_cast<std::size_t>(dims)));
  StreamRng rng(opts.seed);
  for (auto& shift : shifts)
    for (double& s : shift) s = rng.uniform();

  std::vector<double> sums(static_cast<std::size_t>(reps), 0.0);
  std::vector<double> u(static_cast<std::size_t>(dims)), ua(static_cast<std::size_t>(dims)), y(static_cast<std::size_t>(k));
  std::uint64_t done = 0;
  std::uint64_t target = std::max<std::uint64_t>(opts.initial_points, 16);
  OrthantResult result{0.0, 0.0, OrthantMethod::QuasiMonteCarlo};
  while (true) {
    for (int r = 0; r < reps; ++r) {
      const auto& shift = shifts[static_cast<std::size_t>(r)];
      double acc = 0.0;
      for (std::uint64_t i = done + 1; i <= target; ++i) {
        for (int d = 0; d < dims; ++d) {
          double x = static_cast<double>(i) * gens[static_cast<std::size_t>(d)] + shift[static_cast<std::size_t>(d)];
          x -= std::floor(x);
          const double p = std::fabs(2.0 * x - 1.0);  // baker's transform
          u[static_cast<std::size_t>(d)] = p;
          ua[static_cast<std::size_t>(d)] = 1.0 - p;
        }
        acc += 0.5 * (detail::orthant_integrand(chol, u.data(), y.data()) +
                      detail::orthant_integrand(chol, ua.data(), y.data()));
      }
      sums[static_cast<std::size_t>(r)] += acc;
    }
    done = target;

    double mean = 0.0;
    for (double s : sums) mean += s / static_cast<double>(done);
    mean /= reps;
    double var = 0.0;
    for (double s : sums) {
      const double dev = s / static_cast<double>(done) - mean;
      var += dev * dev;
    }
    var /= (reps - 1);
    result.probability = mean;
    result.standard_error = std::sqrt(var / reps);
    if (result.standard_error <= target_se) return result;
    if (done >= opts.max_points) {
      throw BudgetExceeded("orthant_probability: target standard error not reached", result);
    }
    target = std::min<std::uint64_t>(2 * done, opts.max_points);
  }
}

}  // namespace degen_dt
