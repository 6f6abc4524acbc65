#include "intruder/kms.hpp"

#include <cmath>
#include <string>

#include "intruder/errors.hpp"

namespace intruder {

namespace {

void require_dim(const KmsMatrix& m, std::size_t size) {
  if (size != m.dim()) {
    throw ParameterError("dimension mismatch: matrix is " + std::to_string(m.dim()) +
                         ", vector is " + std::to_string(size));
  }
}

}  // namespace

KmsMatrix::KmsMatrix(double alpha, double rho, std::size_t dim)
    : alpha_{alpha}, rho_{rho}, dim_{dim} {
  validate(ClassStatistics{alpha, rho});
  if (dim == 0) throw ParameterError("KMS matrix dimension must be at least 1");
  inverse_scale_ = 1.0 / (alpha_ * (1.0 - rho_ * rho_));
}

KmsMatrix::KmsMatrix(const ClassStatistics& stats, std::size_t dim)
    : KmsMatrix(stats.alpha, stats.rho, dim) {}

std::vector<double> kms_inverse_apply(const KmsMatrix& m, std::span<const double> v) {
  require_dim(m, v.size());
  const std::size_t n = m.dim();
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = v[0] / m.alpha();
    return out;
  }
  const double rho = m.rho();
  const double diag = 1.0 + rho * rho;
  const double scale = m.inverse_scale();
  out[0] = scale * (v[0] - rho * v[1]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out[i] = scale * (diag * v[i] - rho * (v[i - 1] + v[i + 1]));
  }
  out[n - 1] = scale * (v[n - 1] - rho * v[n - 2]);
  return out;
}

double kms_logdet(const KmsMatrix& m) {
  const auto n = static_cast<double>(m.dim());
  return n * std::log(m.alpha()) + (n - 1.0) * std::log1p(-m.rho() * m.rho());
}

double kms_quadratic_form(const KmsMatrix& m, const SufficientStatistics& stats) {
  require_dim(m, stats.count());
  const double rho = m.rho();
  const double rho_sq = rho * rho;
  const double numerator = (1.0 + rho_sq) * stats.s0() -
                           rho_sq * (stats.first_sq() + stats.last_sq()) - 2.0 * rho * stats.s1();
  return numerator * m.inverse_scale();
}

double kms_quadratic_form(const KmsMatrix& m, std::span<const double> v) {
  return kms_quadratic_form(m, SufficientStatistics::from_series(v));
}

Eigen::MatrixXd kms_cholesky_factor(const KmsMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.dim());
  const double rho = m.rho();
  const double head = std::sqrt(m.alpha());
  const double innovation = std::sqrt(m.alpha() * (1.0 - rho * rho));
  Eigen::MatrixXd factor = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double value = (j == 0) ? head : innovation;
    for (Eigen::Index i = j; i < n; ++i) {
      factor(i, j) = value;
      value *= rho;
    }
  }
  return factor;
}

Eigen::MatrixXd kms_dense(const KmsMatrix& m) {
  return covariance_matrix(ClassStatistics{m.alpha(), m.rho()}, static_cast<int>(m.dim()));
}

}  // namespace intruder
