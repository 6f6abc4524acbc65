// ============================================================================
// kms.hpp -- closed-form algebra for Kac-Murdock-Szego matrices
//
// Sigma_ij = alpha * rho^|i-j| has a tridiagonal inverse
//
//               1        | 1    -rho                      |
//   Sigma^-1 = -------   |-rho  1+rho^2  -rho             |
//              a(1-r^2)  |       ...     ...    ...       |
//                        |              -rho  1+rho^2 -rho|
//                        |                     -rho    1  |
//
// and determinant alpha^n (1-rho^2)^(n-1). Nothing here forms an n x n
// matrix except the explicitly dense helpers at the bottom.
// ============================================================================
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "intruder/model.hpp"
#include "intruder/sufficient_statistics.hpp"

namespace intruder {

class KmsMatrix {
 public:
  KmsMatrix(double alpha, double rho, std::size_t dim);
  KmsMatrix(const ClassStatistics& stats, std::size_t dim);

  [[nodiscard]] double alpha() const noexcept { return alpha_; }
  [[nodiscard]] double rho() const noexcept { return rho_; }
  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

  /// Scale 1/(alpha(1-rho^2)) shared by every entry of the inverse.
  [[nodiscard]] double inverse_scale() const noexcept { return inverse_scale_; }

 private:
  double alpha_;
  double rho_;
  std::size_t dim_;
  double inverse_scale_;
};

/// Sigma^-1 v in O(n) using the tridiagonal inverse.
[[nodiscard]] std::vector<double> kms_inverse_apply(const KmsMatrix& m, std::span<const double> v);

/// n ln(alpha) + (n-1) ln(1-rho^2); the determinant itself is never formed.
[[nodiscard]] double kms_logdet(const KmsMatrix& m);

/// v^T Sigma^-1 v = [(1+rho^2) s0 - rho^2 (v_0^2 + v_{n-1}^2) - 2 rho s1] / (alpha(1-rho^2))
[[nodiscard]] double kms_quadratic_form(const KmsMatrix& m, std::span<const double> v);
[[nodiscard]] double kms_quadratic_form(const KmsMatrix& m, const SufficientStatistics& stats);

/// Lower-triangular L with L L^T = Sigma, from the AR(1) innovation form:
/// column 0 is sqrt(alpha) rho^i, column j >= 1 is sqrt(alpha(1-rho^2)) rho^(i-j).
[[nodiscard]] Eigen::MatrixXd kms_cholesky_factor(const KmsMatrix& m);

/// Dense Sigma. Test and diagnostic support only.
[[nodiscard]] Eigen::MatrixXd kms_dense(const KmsMatrix& m);

}  // namespace intruder
