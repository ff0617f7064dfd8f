#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "gpbf/numeric.hpp"

namespace gpbf {

// Squared-exponential kernel k(a, b | xi) = exp(-xi^2 (a-b)^2 / 2) and the
// derivative cross-covariance blocks needed to sample slope functions.
//
// Derivative conventions (d = a - b):
//   d/db k  =  xi^2 d k          (value vs derivative cross block)
//   d/da k  = -xi^2 d k
//   d2/dadb =  xi^2 (1 - xi^2 d^2) k
namespace kernel {

inline Matrix se(const Vector& a, const Vector& b, double xi) {
  Matrix K(a.size(), b.size());
  const double c = -0.5 * xi * xi;
  for (Eigen::Index j = 0; j < b.size(); ++j)
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      const double d = a[i] - b[j];
      K(i, j) = std::exp(c * d * d);
    }
  return K;
}

inline Matrix se(const Vector& x, double xi) { return se(x, x, xi); }

// Derivative in the second argument: cov(beta(a_i), beta'(b_j)).
inline Matrix se_d2(const Vector& a, const Vector& b, double xi) {
  Matrix K(a.size(), b.size());
  const double x2 = xi * xi;
  for (Eigen::Index j = 0; j < b.size(); ++j)
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      const double d = a[i] - b[j];
      K(i, j) = x2 * d * std::exp(-0.5 * x2 * d * d);
    }
  return K;
}

// Derivative in the first argument: cov(beta'(a_i), beta(b_j)).
inline Matrix se_d1(const Vector& a, const Vector& b, double xi) {
  return -se_d2(a, b, xi);
}

// Mixed second derivative: cov(beta'(a_i), beta'(b_j)).
inline Matrix se_d1d2(const Vector& a, const Vector& b, double xi) {
  Matrix K(a.size(), b.size());
  const double x2 = xi * xi;
  for (Eigen::Index j = 0; j < b.size(); ++j)
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      const double d = a[i] - b[j];
      K(i, j) = x2 * (1.0 - x2 * d * d) * std::exp(-0.5 * x2 * d * d);
    }
  return K;
}

struct DerivBlocks {
  Matrix K10;  // K10(i,j) = d/dx_j k(x_i, x_j); antisymmetric in the distance
  Matrix K11;  // K11(i,j) = d2/dx_i dx_j k(x_i, x_j); diagonal = xi^2
};

inline DerivBlocks deriv_blocks(const Vector& x, double xi) {
  return {se_d2(x, x, xi), se_d1d2(x, x, xi)};
}

// Hadamard effect covariance K o (x x'); Schur product of PSD matrices.
inline Matrix effect_cov(const Vector& x, const Matrix& K) {
  return K.cwiseProduct(x * x.transpose());
}

// Joint covariance of (beta(t), beta'(t)) on a common grid, scaled by tau2.
// Block layout: [[K, K10], [K10', K11]].
inline Matrix joint_value_deriv_cov(const Vector& t, double xi, double tau2) {
  const Eigen::Index m = t.size();
  Matrix S(2 * m, 2 * m);
  const auto blocks = deriv_blocks(t, xi);
  S.topLeftCorner(m, m) = se(t, xi);
  S.topRightCorner(m, m) = blocks.K10;
  S.bottomLeftCorner(m, m) = blocks.K10.transpose();
  S.bottomRightCorner(m, m) = blocks.K11;
  return tau2 * S;
}

}  // namespace kernel
}  // namespace gpbf
