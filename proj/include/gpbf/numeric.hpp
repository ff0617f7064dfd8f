#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "gpbf/errors.hpp"

namespace gpbf {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Fixed-order log-sum-exp; reductions stay deterministic regardless of how
// the terms were produced.
inline double log_sum_exp(const std::vector<double>& logs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : logs) m = std::max(m, v);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double v : logs) s += std::exp(v - m);
  return m + std::log(s);
}

// Weighted variant: log(sum_i w_i * exp(logs_i)) with w_i > 0.
inline double log_sum_exp(const std::vector<double>& logs,
                          const std::vector<double>& weights) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : logs) m = std::max(m, v);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (std::size_t i = 0; i < logs.size(); ++i)
    s += weights[i] * std::exp(logs[i] - m);
  return m + std::log(s);
}

// Diagonal-jitter escalation used whenever a Cholesky factorization is
// required: start at eps0 * mean(diag), multiply by `factor` up to eps_max.
struct JitterPolicy {
  double eps0 = 1e-10;
  double eps_max = 1e-4;
  double factor = 10.0;
};

struct CholResult {
  Matrix L;            // lower Cholesky factor of (M + jitter * I)
  double jitter = 0.0; // absolute jitter that was added
  int attempts = 0;    // number of failed factorizations before success
};

inline CholResult chol_with_jitter(const Matrix& M, const JitterPolicy& policy,
                                   double xi_context = 0.0) {
  Eigen::LLT<Matrix> llt(M);
  if (llt.info() == Eigen::Success)
    return {Matrix(llt.matrixL()), 0.0, 0};
  const double scale = M.diagonal().mean();
  int attempts = 1;
  for (double eps = policy.eps0; eps <= policy.eps_max; eps *= policy.factor) {
    Matrix Mj = M;
    Mj.diagonal().array() += eps * scale;
    llt.compute(Mj);
    if (llt.info() == Eigen::Success)
      return {Matrix(llt.matrixL()), eps * scale, attempts};
    ++attempts;
  }
  throw numeric_error("matrix not positive definite after jitter escalation",
                      xi_context);
}

inline double logdet_from_chol(const Matrix& L) {
  return 2.0 * L.diagonal().array().log().sum();
}

// Symmetric square root with eigenvalue clipping. Used for sampling from
// possibly rank-deficient Gaussians (the joint value/derivative covariance
// is exactly singular at xi = 0).
inline Matrix psd_sqrt(const Matrix& S) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(S);
  if (es.info() != Eigen::Success)
    throw numeric_error("eigendecomposition failed", 0.0);
  Vector ev = es.eigenvalues();
  const double floor = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    ev[i] = ev[i] > floor ? std::sqrt(ev[i]) : 0.0;
  return es.eigenvectors() * ev.asDiagonal();
}

using Rng = std::mt19937_64;

inline Vector standard_normal(Rng& rng, Eigen::Index n) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Vector z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = nd(rng);
  return z;
}

// Gauss-Legendre nodes/weights on (0, 1), Newton iteration on the Legendre
// recurrence.
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline Quadrature gauss_legendre_01(int n) {
  Quadrature q;
  q.nodes.resize(n);
  q.weights.resize(n);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    q.nodes[i] = (1.0 - x) / 2.0;            // descending x -> ascending node
    q.weights[i] = w / 2.0;
    q.nodes[n - 1 - i] = (1.0 + x) / 2.0;
    q.weights[n - 1 - i] = w / 2.0;
  }
  return q;
}

}  // namespace gpbf
