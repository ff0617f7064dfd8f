#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>

#include "gpbf/dataset.hpp"
#include "gpbf/kernel.hpp"
#include "gpbf/numeric.hpp"

namespace gpbf {

// Configuration shared by all analyses. g = 0 and s_xi = 0 mean "derive the
// default": g = n (unit-information) and s_xi = 6 e / range(x).
struct TestConfig {
  double g = 0.0;
  double e = std::exp(-1.0);  // standardized deviation from linearity
  double s_xi = 0.0;
  std::uint64_t seed = 20260826;
  int n_quad = 201;
  int n_is = 5000;
  int n_draws = 50;
  int threads = 1;
  JitterPolicy jitter;

  double effective_g(const Dataset& d) const {
    return g > 0.0 ? g : static_cast<double>(d.n());
  }
  double effective_s_xi(const Dataset& d) const {
    if (s_xi > 0.0) return s_xi;
    const double r = d.range_x();
    if (r <= 0.0) throw validation_error("constant predictor: range(x) = 0");
    return 6.0 * e / r;
  }
  void check() const {
    if (s_xi < 0.0) throw usage_error("s_xi must be positive");
    if (e <= 0.0) throw usage_error("e must be positive");
    if (g < 0.0) throw usage_error("g must be positive");
    if (n_quad < 32) throw usage_error("n_quad must be at least 32");
    if (n_is < 1000) throw usage_error("n_is must be at least 1000");
    if (n_draws < 1) throw usage_error("n_draws must be at least 1");
  }
};

// Pieces of the conditional marginal likelihood m(y | xi), with the
// regression coefficients and the error variance integrated out in closed
// form (flat prior on gamma, sigma^-2 prior on the variance):
//
//   log m(y|xi) = -(n-k)/2 log(2 pi) - 1/2 logdet V - 1/2 logdet(Z'V^-1 Z)
//                 + lgamma((n-k)/2) - (n-k)/2 log(S/2),
//   S = y'V^-1 y - y'V^-1 Z (Z'V^-1 Z)^-1 Z'V^-1 y.
//
// When k = 0 the Z terms are dropped and the exponent is n/2.
struct IntegratedLikelihoodParts {
  double logdet_V = 0.0;
  double logdet_ZtVinvZ = 0.0;
  double S = 0.0;
  Vector gamma_hat;
  double log_marginal = 0.0;
  double jitter = 0.0;
  int jitter_attempts = 0;
};

// V_xi = g (x'x)^-1 K(xi) o xx' + I, the y covariance divided by sigma^2.
// At xi = 0 this is the g-prior covariance g (x'x)^-1 xx' + I exactly.
inline Matrix build_V(const Dataset& d, const TestConfig& cfg, double xi) {
  const double g = cfg.effective_g(d);
  const double xtx = d.x.squaredNorm();
  Matrix V = (g / xtx) * kernel::effect_cov(d.x, kernel::se(d.x, xi));
  V.diagonal().array() += 1.0;
  return V;
}

inline IntegratedLikelihoodParts log_marginal_given_xi(const Dataset& d,
                                                       const TestConfig& cfg,
                                                       double xi) {
  const Eigen::Index n = d.n();
  const Eigen::Index k = d.k();
  const double a = 0.5 * static_cast<double>(n - k);

  const Matrix V = build_V(d, cfg, xi);
  const CholResult ch = chol_with_jitter(V, cfg.jitter, xi);
  const auto L = ch.L.triangularView<Eigen::Lower>();

  IntegratedLikelihoodParts parts;
  parts.jitter = ch.jitter;
  parts.jitter_attempts = ch.attempts;
  parts.logdet_V = logdet_from_chol(ch.L);

  // Whitened solves: V^-1 v = L^-T L^-1 v.
  const Vector wy = L.solve(d.y);
  double S = wy.squaredNorm();

  if (k > 0) {
    const Matrix wZ = L.solve(d.Z);
    const Matrix A = wZ.transpose() * wZ;     // Z' V^-1 Z
    const Vector b = wZ.transpose() * wy;     // Z' V^-1 y
    const CholResult chA = chol_with_jitter(A, cfg.jitter, xi);
    const auto LA = chA.L.triangularView<Eigen::Lower>();
    parts.logdet_ZtVinvZ = logdet_from_chol(chA.L);
    const Vector u = LA.solve(b);
    S -= u.squaredNorm();
    parts.gamma_hat =
        chA.L.triangularView<Eigen::Lower>().transpose().solve(u);
  }

  if (!(S > 0.0))
    throw numeric_error("residual quadratic form is not positive", xi);
  parts.S = S;
  parts.log_marginal = -a * std::log(2.0 * M_PI) - 0.5 * parts.logdet_V -
                       0.5 * parts.logdet_ZtVinvZ + std::lgamma(a) -
                       a * std::log(S / 2.0);
  return parts;
}

}  // namespace gpbf
