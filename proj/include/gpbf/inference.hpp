#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "gpbf/half_cauchy.hpp"
#include "gpbf/marginal.hpp"

namespace gpbf {

enum class BfMethod { quadrature, importance };

inline const char* to_string(BfMethod m) {
  return m == BfMethod::quadrature ? "quadrature" : "importance";
}

struct BayesFactorResult {
  double log_bf01 = 0.0;
  double log_m0 = 0.0;
  double log_m1 = 0.0;
  BfMethod method = BfMethod::quadrature;
  double mc_se = 0.0;  // importance sampling only, delta method on log scale
  double ess = 0.0;    // effective sample size of the importance weights
  int n_eval = 0;
  int jitter_events = 0;
  double s_xi = 0.0;
  double g = 0.0;

  double bf01() const { return std::exp(log_bf01); }
  // Posterior model probability of M0 under equal prior odds.
  double post_prob_m0() const { return 1.0 / (1.0 + std::exp(-log_bf01)); }
};

namespace detail {

// Conditional marginals at the u-transformed quadrature nodes. Under
// xi = s tan(pi u / 2) the half-Cauchy prior is uniform on u in (0,1), so
// m1 = integral_0^1 m(y | xi(u)) du.
struct GridEval {
  Quadrature quad;
  std::vector<double> xi;
  std::vector<double> log_m;
  int jitter_events = 0;
};

inline GridEval eval_marginal_grid(const Dataset& d, const TestConfig& cfg) {
  GridEval ge;
  ge.quad = gauss_legendre_01(cfg.n_quad);
  const HalfCauchy prior(cfg.effective_s_xi(d));
  ge.xi.resize(ge.quad.nodes.size());
  ge.log_m.resize(ge.quad.nodes.size());
  for (std::size_t i = 0; i < ge.quad.nodes.size(); ++i) {
    ge.xi[i] = prior.inverse_cdf(ge.quad.nodes[i]);
    const auto parts = log_marginal_given_xi(d, cfg, ge.xi[i]);
    ge.log_m[i] = parts.log_marginal;
    if (parts.jitter_attempts > 0) ++ge.jitter_events;
  }
  return ge;
}

}  // namespace detail

// Deterministic B01: Gauss-Legendre on the prior-CDF scale for m1, the
// closed-form conditional at xi = 0 for m0.
inline BayesFactorResult log_bf01_quadrature(const Dataset& d,
                                             const TestConfig& cfg) {
  const auto ge = detail::eval_marginal_grid(d, cfg);
  BayesFactorResult r;
  r.method = BfMethod::quadrature;
  r.log_m1 = log_sum_exp(ge.log_m, ge.quad.weights);
  const auto m0 = log_marginal_given_xi(d, cfg, 0.0);
  r.log_m0 = m0.log_marginal;
  r.log_bf01 = r.log_m0 - r.log_m1;
  r.n_eval = static_cast<int>(ge.log_m.size()) + 1;
  r.jitter_events = ge.jitter_events + (m0.jitter_attempts > 0 ? 1 : 0);
  r.s_xi = cfg.effective_s_xi(d);
  r.g = cfg.effective_g(d);
  return r;
}

// Importance-sampling B01 with the half-Cauchy prior itself as proposal:
// m1_hat = mean_t m(y | xi_t), xi_t ~ prior. Reproducible under the seed.
inline BayesFactorResult log_bf01_importance(const Dataset& d,
                                             const TestConfig& cfg) {
  const HalfCauchy prior(cfg.effective_s_xi(d));
  Rng rng(cfg.seed);
  const int T = cfg.n_is;
  std::vector<double> logs;
  logs.reserve(T);
  int jitter_events = 0;
  int failed = 0;
  for (int t = 0; t < T; ++t) {
    const double xi = prior.sample(rng);
    try {
      const auto parts = log_marginal_given_xi(d, cfg, xi);
      logs.push_back(parts.log_marginal);
      if (parts.jitter_attempts > 0) ++jitter_events;
    } catch (const numeric_error&) {
      ++failed;
    }
  }
  if (logs.empty())
    throw numeric_error("all importance draws failed numerically",
                        prior.scale);

  BayesFactorResult r;
  r.method = BfMethod::importance;
  const double lse = log_sum_exp(logs);
  r.log_m1 = lse - std::log(static_cast<double>(logs.size()));

  // Delta method on the log scale: sd(w) / (mean(w) sqrt(T)), computed on
  // shifted weights for stability.
  const double lmax = *std::max_element(logs.begin(), logs.end());
  double sum = 0.0, sumsq = 0.0;
  for (double l : logs) {
    const double w = std::exp(l - lmax);
    sum += w;
    sumsq += w * w;
  }
  const double m = static_cast<double>(logs.size());
  const double mean_w = sum / m;
  const double var_w = std::max(0.0, sumsq / m - mean_w * mean_w) * m / (m - 1.0);
  r.mc_se = std::sqrt(var_w) / (mean_w * std::sqrt(m));
  r.ess = sum * sum / sumsq;

  const auto m0 = log_marginal_given_xi(d, cfg, 0.0);
  r.log_m0 = m0.log_marginal;
  r.log_bf01 = r.log_m0 - r.log_m1;
  r.n_eval = static_cast<int>(m) + 1 + failed;
  r.jitter_events = jitter_events;
  r.s_xi = prior.scale;
  r.g = cfg.effective_g(d);
  return r;
}

struct PosteriorSample {
  double xi = 0.0;
  double sigma2 = 1.0;
  Vector gamma;
};

namespace detail {

// Piecewise-linear inverse CDF of p(xi | y) on the u grid, built from the
// quadrature weights. Returns draws of u; callers map through the prior
// inverse CDF.
inline std::vector<double> posterior_u_draws(const GridEval& ge, int T,
                                             Rng& rng) {
  const std::size_t m = ge.log_m.size();
  double lmax = *std::max_element(ge.log_m.begin(), ge.log_m.end());
  std::vector<double> cdf(m);
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    acc += ge.quad.weights[i] * std::exp(ge.log_m[i] - lmax);
    cdf[i] = acc;
  }
  for (auto& c : cdf) c /= acc;

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> out(T);
  for (int t = 0; t < T; ++t) {
    const double v = unif(rng);
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), v);
    const std::size_t i = static_cast<std::size_t>(it - cdf.begin());
    const double c_lo = i == 0 ? 0.0 : cdf[i - 1];
    const double c_hi = i < m ? cdf[i] : 1.0;
    const double u_lo = i == 0 ? 0.0 : ge.quad.nodes[i - 1];
    const double u_hi = i < m ? ge.quad.nodes[i] : 1.0;
    const double f = c_hi > c_lo ? (v - c_lo) / (c_hi - c_lo) : 0.5;
    out[t] = u_lo + f * (u_hi - u_lo);
  }
  return out;
}

}  // namespace detail

// i.i.d. draws from p(xi, sigma2, gamma | y, M1): xi by grid inverse CDF,
// then the exact conditionals sigma2 | xi ~ InvGamma((n-k)/2, S/2) and
// gamma | sigma2, xi ~ N(gamma_hat, sigma2 (Z'V^-1 Z)^-1).
inline std::vector<PosteriorSample> sample_posterior(const Dataset& d,
                                                     const TestConfig& cfg,
                                                     int T) {
  if (T < 1) throw usage_error("posterior sample count must be positive");
  const auto ge = detail::eval_marginal_grid(d, cfg);
  const HalfCauchy prior(cfg.effective_s_xi(d));
  Rng rng(cfg.seed);
  const auto us = detail::posterior_u_draws(ge, T, rng);

  const double a = 0.5 * static_cast<double>(d.n() - d.k());
  std::gamma_distribution<double> gamma_a(a, 1.0);

  std::vector<PosteriorSample> out;
  out.reserve(T);
  for (double u : us) {
    PosteriorSample s;
    s.xi = prior.inverse_cdf(std::clamp(u, 1e-12, 1.0 - 1e-12));
    const auto parts = log_marginal_given_xi(d, cfg, s.xi);
    s.sigma2 = 0.5 * parts.S / gamma_a(rng);
    if (d.k() > 0) {
      const Matrix V = build_V(d, cfg, s.xi);
      const CholResult ch = chol_with_jitter(V, cfg.jitter, s.xi);
      const Matrix wZ = ch.L.triangularView<Eigen::Lower>().solve(d.Z);
      const Matrix A = wZ.transpose() * wZ;
      const CholResult chA = chol_with_jitter(A, cfg.jitter, s.xi);
      const Vector z = standard_normal(rng, d.k());
      s.gamma = parts.gamma_hat +
                std::sqrt(s.sigma2) *
                    chA.L.triangularView<Eigen::Lower>().transpose().solve(z);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace gpbf
