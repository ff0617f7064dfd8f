#pragma once

#include <cmath>
#include <random>

#include "gpbf/errors.hpp"
#include "gpbf/numeric.hpp"

namespace gpbf {

// Half-Cauchy(s) on [0, inf); the median equals the scale s.
struct HalfCauchy {
  double scale;

  explicit HalfCauchy(double s) : scale(s) {
    if (!(s > 0.0)) throw usage_error("half-Cauchy scale must be positive");
  }

  double pdf(double xi) const {
    if (xi < 0.0) return 0.0;
    const double r = xi / scale;
    return 2.0 / (M_PI * scale * (1.0 + r * r));
  }

  double log_pdf(double xi) const { return std::log(pdf(xi)); }

  double cdf(double xi) const {
    return xi <= 0.0 ? 0.0 : (2.0 / M_PI) * std::atan(xi / scale);
  }

  double inverse_cdf(double u) const {
    if (!(u > 0.0 && u < 1.0))
      throw usage_error("half-Cauchy inverse CDF needs u in (0,1)");
    return scale * std::tan(M_PI * u / 2.0);
  }

  double sample(Rng& rng) const {
    std::uniform_real_distribution<double> unif(
        std::numeric_limits<double>::min(), 1.0);
    return inverse_cdf(unif(rng));
  }
};

}  // namespace gpbf
