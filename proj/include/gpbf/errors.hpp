#pragma once

#include <stdexcept>
#include <string>

namespace gpbf {

// Bad or degenerate input data (constant predictor, rank-deficient
// covariates, malformed CSV cells, ...). CLI exit code 3.
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure after the jitter policy is exhausted. Carries the
// kernel roughness at which the factorization failed. CLI exit code 4.
class numeric_error : public std::runtime_error {
 public:
  numeric_error(const std::string& msg, double xi)
      : std::runtime_error(msg + " (xi=" + std::to_string(xi) + ")"), xi_(xi) {}
  double xi() const { return xi_; }

 private:
  double xi_;
};

// Invalid configuration or flag combination. CLI exit code 2.
class usage_error : public std::runtime_error {
 public:
  explicit usage_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace gpbf
