#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "gpbf/inference.hpp"
#include "gpbf/kernel.hpp"

namespace gpbf {

enum class Provenance { prior, posterior };

// Sampled coefficient functions beta(x), mean functions beta(x) o x, and
// slope functions eta(x) = beta(x) + beta'(x) o x, one row per draw.
struct FunctionDraws {
  Vector grid;
  Matrix beta;     // T x m
  Matrix mean_fn;  // T x m, beta o grid
  Matrix slope;    // T x m, eta
  Provenance provenance = Provenance::prior;

  Eigen::Index draws() const { return beta.rows(); }
};

namespace detail {

inline void finalize_draw(FunctionDraws& fd, Eigen::Index t, const Vector& f) {
  const Eigen::Index m = fd.grid.size();
  const Vector beta = f.head(m);
  const Vector dbeta = f.tail(m);
  fd.beta.row(t) = beta;
  fd.mean_fn.row(t) = beta.cwiseProduct(fd.grid);
  fd.slope.row(t) = beta + dbeta.cwiseProduct(fd.grid);
}

}  // namespace detail

// Joint draws of (beta, beta') from the GP prior at fixed roughness xi.
// The 2m x 2m covariance is exactly singular at xi = 0 (constant functions),
// so sampling goes through the clipped eigen square root.
inline FunctionDraws draw_functions_prior(const Vector& grid, double xi,
                                          double tau2, int T,
                                          std::uint64_t seed) {
  if (!(tau2 > 0.0)) throw usage_error("tau2 must be positive");
  if (T < 1) throw usage_error("draw count must be positive");
  const Eigen::Index m = grid.size();
  FunctionDraws fd;
  fd.grid = grid;
  fd.beta.resize(T, m);
  fd.mean_fn.resize(T, m);
  fd.slope.resize(T, m);
  fd.provenance = Provenance::prior;

  const Matrix A = psd_sqrt(kernel::joint_value_deriv_cov(grid, xi, tau2));
  Rng rng(seed);
  for (int t = 0; t < T; ++t)
    detail::finalize_draw(fd, t, A * standard_normal(rng, 2 * m));
  return fd;
}

// Prior draws with xi marginalized over its half-Cauchy prior: a fresh xi
// per function draw.
inline FunctionDraws draw_functions_prior_marginal(const Vector& grid,
                                                   double s_xi, double tau2,
                                                   int T, std::uint64_t seed) {
  if (!(tau2 > 0.0)) throw usage_error("tau2 must be positive");
  if (T < 1) throw usage_error("draw count must be positive");
  const HalfCauchy prior(s_xi);
  const Eigen::Index m = grid.size();
  FunctionDraws fd;
  fd.grid = grid;
  fd.beta.resize(T, m);
  fd.mean_fn.resize(T, m);
  fd.slope.resize(T, m);
  fd.provenance = Provenance::prior;

  Rng rng(seed);
  for (int t = 0; t < T; ++t) {
    const double xi = prior.sample(rng);
    const Matrix A = psd_sqrt(kernel::joint_value_deriv_cov(grid, xi, tau2));
    detail::finalize_draw(fd, t, A * standard_normal(rng, 2 * m));
  }
  return fd;
}

inline Vector default_grid(const Dataset& d) {
  std::vector<double> v(d.x.data(), d.x.data() + d.x.size());
  std::sort(v.begin(), v.end());
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// One function draw per posterior sample. Given (xi, sigma2, gamma) with
// tau2 = sigma2 g / x'x, D = diag(x) and r = y - Z gamma, the conditional of
// f = (beta(t), beta'(t)) given the data is Gaussian with
//   mean = B C^-1 r,  cov = S_tt - B C^-1 B',
// where C = tau2 D K(x,x) D + sigma2 I and B stacks the value and derivative
// cross-covariances against the observations.
inline FunctionDraws draw_functions_posterior(
    const Dataset& d, const TestConfig& cfg,
    const std::vector<PosteriorSample>& samples, const Vector& grid) {
  if (samples.empty()) throw usage_error("posterior sample list is empty");
  const Eigen::Index n = d.n();
  const Eigen::Index m = grid.size();
  const double g = cfg.effective_g(d);
  const double xtx = d.x.squaredNorm();

  FunctionDraws fd;
  fd.grid = grid;
  fd.beta.resize(static_cast<Eigen::Index>(samples.size()), m);
  fd.mean_fn.resize(static_cast<Eigen::Index>(samples.size()), m);
  fd.slope.resize(static_cast<Eigen::Index>(samples.size()), m);
  fd.provenance = Provenance::posterior;

  Rng rng(cfg.seed + 1);  // separate stream from the parameter sampler
  for (std::size_t t = 0; t < samples.size(); ++t) {
    const auto& s = samples[t];
    const double tau2 = s.sigma2 * g / xtx;
    const Vector r = d.k() > 0 ? Vector(d.y - d.Z * s.gamma) : d.y;

    Matrix C = tau2 * kernel::effect_cov(d.x, kernel::se(d.x, s.xi));
    C.diagonal().array() += s.sigma2;
    const CholResult ch = chol_with_jitter(C, cfg.jitter, s.xi);
    const auto L = ch.L.triangularView<Eigen::Lower>();

    Matrix B(2 * m, n);
    B.topRows(m) = tau2 * kernel::se(grid, d.x, s.xi) * d.x.asDiagonal();
    B.bottomRows(m) =
        tau2 * kernel::se_d1(grid, d.x, s.xi) * d.x.asDiagonal();

    const Matrix Wt = L.solve(B.transpose());  // L^-1 B'
    const Vector wr = L.solve(r);
    const Vector mean = Wt.transpose() * wr;
    Matrix cov = kernel::joint_value_deriv_cov(grid, s.xi, tau2) -
                 Wt.transpose() * Wt;
    detail::finalize_draw(fd, static_cast<Eigen::Index>(t),
                          mean + psd_sqrt(cov) * standard_normal(rng, 2 * m));
  }
  return fd;
}

struct SignProbs {
  double p_pos = 0.0;
  double p_neg = 0.0;
  double p_comp = 0.0;
  long n_pos = 0;
  long n_neg = 0;
  long n_draws = 0;
};

// Proportion of draws whose slope function is positive (negative) at every
// grid point.
inline SignProbs sign_consistency(const FunctionDraws& fd) {
  if (fd.draws() == 0) throw usage_error("no draws");
  SignProbs sp;
  sp.n_draws = fd.draws();
  for (Eigen::Index t = 0; t < fd.draws(); ++t) {
    if ((fd.slope.row(t).array() > 0.0).all())
      ++sp.n_pos;
    else if ((fd.slope.row(t).array() < 0.0).all())
      ++sp.n_neg;
  }
  sp.p_pos = static_cast<double>(sp.n_pos) / sp.n_draws;
  sp.p_neg = static_cast<double>(sp.n_neg) / sp.n_draws;
  sp.p_comp = 1.0 - sp.p_pos - sp.p_neg;
  return sp;
}

// One-sided Bayes factors against the unconstrained nonlinear model, as
// ratios of posterior to prior sign-consistency proportions. Zero
// denominators yield +infinity with the raw counts kept for reporting; a
// rule-of-three bound (3/T) accompanies any zero proportion.
struct OneSidedResult {
  SignProbs prior;
  SignProbs posterior;
  double bf_pos_u = 0.0;
  double bf_neg_u = 0.0;
  double bf_comp_u = 0.0;
  double bf_pos_neg = 0.0;
  double bf_pos_comp = 0.0;
  double bf_neg_comp = 0.0;
  bool any_infinite = false;
  double prior_zero_bound = 0.0;  // rule of three, 0 when no zero proportion
};

namespace detail {
inline double ratio(double num, double den, bool& inf_flag) {
  if (den > 0.0) return num / den;
  if (num == 0.0) return 1.0;  // 0/0: no information either way
  inf_flag = true;
  return std::numeric_limits<double>::infinity();
}
}  // namespace detail

inline OneSidedResult one_sided_bayes_factors(const FunctionDraws& prior,
                                              const FunctionDraws& posterior) {
  if (prior.grid.size() != posterior.grid.size())
    throw usage_error("prior and posterior draws use different grids");
  OneSidedResult r;
  r.prior = sign_consistency(prior);
  r.posterior = sign_consistency(posterior);
  r.bf_pos_u = detail::ratio(r.posterior.p_pos, r.prior.p_pos, r.any_infinite);
  r.bf_neg_u = detail::ratio(r.posterior.p_neg, r.prior.p_neg, r.any_infinite);
  r.bf_comp_u =
      detail::ratio(r.posterior.p_comp, r.prior.p_comp, r.any_infinite);
  // Pairwise factors by transitivity.
  r.bf_pos_neg = detail::ratio(r.bf_pos_u, r.bf_neg_u, r.any_infinite);
  r.bf_pos_comp = detail::ratio(r.bf_pos_u, r.bf_comp_u, r.any_infinite);
  r.bf_neg_comp = detail::ratio(r.bf_neg_u, r.bf_comp_u, r.any_infinite);
  if (r.prior.p_pos == 0.0 || r.prior.p_neg == 0.0 || r.prior.p_comp == 0.0 ||
      r.posterior.p_pos == 0.0 || r.posterior.p_neg == 0.0 ||
      r.posterior.p_comp == 0.0)
    r.prior_zero_bound = 3.0 / static_cast<double>(r.prior.n_draws);
  return r;
}

}  // namespace gpbf
