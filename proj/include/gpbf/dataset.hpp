#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "gpbf/errors.hpp"
#include "gpbf/numeric.hpp"

namespace gpbf {

// Outcome y, key predictor x, optional covariate matrix Z (a column of ones
// acts as the intercept).
struct Dataset {
  Vector y;
  Vector x;
  Matrix Z;  // n x k, k may be 0

  Eigen::Index n() const { return y.size(); }
  Eigen::Index k() const { return Z.size() == 0 ? 0 : Z.cols(); }

  double range_x() const { return x.maxCoeff() - x.minCoeff(); }
};

struct Diagnostic {
  std::string check;
  bool warning = false;
  std::string detail;
  double value = 0.0;
};

namespace detail {
// Cosine alignment |x'z| / (|x||z|); zero iff x is orthogonal to z. Plain
// Pearson correlation is undefined against a constant (intercept) column.
inline double alignment(const Vector& x, const Vector& z) {
  double nx = x.norm(), nz = z.norm();
  if (nx == 0.0 || nz == 0.0) return 0.0;
  return std::abs(x.dot(z)) / (nx * nz);
}
}  // namespace detail

// Hard-fails on degenerate inputs, returns per-check diagnostics otherwise.
// A warning is raised when x is not orthogonal to some covariate column;
// the model assumes orthogonality (use residualize_x to enforce it).
inline std::vector<Diagnostic> validate_dataset(const Dataset& d) {
  const auto n = d.n();
  const auto k = d.k();
  if (d.x.size() != n)
    throw validation_error("x and y have different lengths");
  if (k > 0 && d.Z.rows() != n)
    throw validation_error("Z row count does not match y");
  if (n < k + 2)
    throw validation_error("too few observations: n < k + 2");
  if (d.range_x() <= 0.0)
    throw validation_error("constant predictor: range(x) = 0");
  if (d.x.squaredNorm() <= 0.0)
    throw validation_error("x'x = 0");

  std::vector<Diagnostic> out;
  if (k > 0) {
    Eigen::ColPivHouseholderQR<Matrix> qr(d.Z);
    if (qr.rank() < k)
      throw validation_error("covariate matrix Z is rank deficient");
    out.push_back({"covariate_rank", false, "Z has full column rank",
                   static_cast<double>(qr.rank())});
  }
  out.push_back({"predictor_range", false, "range(x) > 0", d.range_x()});

  double max_align = 0.0;
  for (Eigen::Index j = 0; j < k; ++j)
    max_align = std::max(max_align, detail::alignment(d.x, d.Z.col(j)));
  Diagnostic orth{"orthogonality", max_align > 1e-8,
                  max_align > 1e-8
                      ? "x is not orthogonal to the covariates; consider --center"
                      : "x orthogonal to all covariate columns",
                  max_align};
  out.push_back(orth);
  return out;
}

// Replaces x by its residual after projecting onto the column space of Z.
// Idempotent; a no-op when k = 0.
inline Dataset residualize_x(const Dataset& d) {
  if (d.k() == 0) return d;
  Eigen::ColPivHouseholderQR<Matrix> qr(d.Z);
  if (qr.rank() < d.k())
    throw validation_error("covariate matrix Z is rank deficient");
  Dataset out = d;
  out.x = d.x - d.Z * qr.solve(d.x);
  return out;
}

}  // namespace gpbf
