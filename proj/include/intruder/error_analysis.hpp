// ============================================================================
// error_analysis.hpp -- a priori error probability of the MAP detector
//
// Under hypothesis h the statistic Z = y^T Q y is a generalised chi-squared
// variable: a weighted sum of chi^2_1 variables with weights lambda_k, the
// eigenvalues of Q Sigma_h. Its CDF is recovered from the characteristic
// function by the half-integer Fourier series
//
//   F(z) = 1/2 - sum_{i=0}^{N} Im[phi(D(i+1/2)) e^{-j z D(i+1/2)}] / (pi (i+1/2))
//
// with spacing D chosen from a Chernoff bound on the aliasing error and N
// from a bound on the truncated tail, each given half of the accuracy target.
// ============================================================================
#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "intruder/detector.hpp"
#include "intruder/model.hpp"

namespace intruder {

inline constexpr double kDefaultAccuracy = 1e-6;
/// Eigenvalues below this fraction of the largest magnitude are dropped.
inline constexpr double kEigenDropRatio = 1e-12;
/// Upper limit on series terms per CDF evaluation; see AccuracyBudget::capped.
inline constexpr std::int64_t kDefaultMaxTerms = 2'000'000;

struct QuadFormSpectrum {
  std::vector<double> eigenvalues;  ///< ascending
  int horizon = 0;
};

struct AccuracyBudget {
  double target = kDefaultAccuracy;  ///< E
  double t = 0.0;                    ///< Chernoff parameter 1/(4 |lambda_max|)
  double theta = 0.0;
  double delta = 0.0;                ///< frequency spacing
  std::int64_t n_terms = 0;          ///< N actually summed (indices 0..N)
  std::int64_t n_terms_main = 0;     ///< (pi/4 E r)^(-2/r) variant
  std::int64_t n_terms_appendix = 0; ///< (r pi/2 E)^(-2/r) variant
  bool capped = false;               ///< bound exceeded max_terms and N was clipped
  double lambda_min = 0.0;           ///< smallest retained |lambda|
  double lambda_max = 0.0;           ///< largest |lambda|
  int effective_dim = 0;             ///< r, eigenvalues kept after dropping
  double drop_threshold = 0.0;       ///< |lambda| cut-off actually applied
  double resolution_bound = 0.0;     ///< theta e^{-2 pi t / D}
  double truncation_bound = 0.0;     ///< tail bound at the N actually used

  [[nodiscard]] double achieved_bound() const noexcept { return resolution_bound + truncation_bound; }
};

struct CdfValue {
  double probability = 0.0;  ///< clamped to [0, 1]
  double unclamped = 0.0;
};

struct ErrorReport {
  double total_error = 0.0;
  double miss_given_1 = 0.0;  ///< Pr(decide 2 | I = 1) = 1 - F(Q, Sigma1, z)
  double miss_given_2 = 0.0;  ///< Pr(decide 1 | I = 2) = F(Q, Sigma2, z)
  double prior1 = 0.5;
  double prior2 = 0.5;
  double threshold = 0.0;
  int horizon = 0;
  bool degenerate = false;  ///< Q == 0, decided by priors alone
  double unclamped_cdf1 = 0.0;
  double unclamped_cdf2 = 0.0;
  AccuracyBudget budget1;  ///< for F(Q, Sigma1, z); empty when degenerate
  AccuracyBudget budget2;
};

/// Eigenvalues of (Sigma1^-1 - Sigma2^-1) Sigma_h, computed on the symmetric
/// similar matrix L^T Q L with L the closed-form KMS factor of Sigma_h.
[[nodiscard]] QuadFormSpectrum q_sigma_eigenvalues(const ClassStatistics& stats1,
                                                   const ClassStatistics& stats2, int horizon,
                                                   ClassLabel hypothesis);

/// phi(w) = prod (1 - 2 j w lambda)^(-1/2), accumulated in log-polar form.
[[nodiscard]] std::complex<double> characteristic_function(const QuadFormSpectrum& spectrum,
                                                           double omega);

/// Eigenvalues with |lambda| >= kEigenDropRatio * |lambda_max|.
[[nodiscard]] std::vector<double> effective_eigenvalues(const QuadFormSpectrum& spectrum);

/// Throws ParameterError for an all-zero spectrum or a target outside (0, 1).
[[nodiscard]] AccuracyBudget accuracy_budget(const QuadFormSpectrum& spectrum, double z,
                                             double target,
                                             std::int64_t max_terms = kDefaultMaxTerms);

/// Pr(Z <= z) from the series with the given budget. An all-zero spectrum is
/// the point mass at 0 and returns the step function directly.
[[nodiscard]] CdfValue cdf_quadratic_form(const QuadFormSpectrum& spectrum, double z,
                                          const AccuracyBudget& budget);
/// Same series with an explicit spacing and last index.
[[nodiscard]] CdfValue cdf_quadratic_form(const QuadFormSpectrum& spectrum, double z,
                                          double delta, std::int64_t n_terms);

[[nodiscard]] ErrorReport total_error(const ModelConfig& config,
                                      double target = kDefaultAccuracy,
                                      std::int64_t max_terms = kDefaultMaxTerms);

struct ErrorSurface {
  std::vector<double> k_ratios;  ///< columns: k2 / k1
  std::vector<double> m_ratios;  ///< rows: m2 / m1
  std::vector<double> errors;    ///< row-major, m_ratios.size() x k_ratios.size()
  double target = kDefaultAccuracy;

  [[nodiscard]] double at(std::size_t row, std::size_t col) const {
    return errors.at(row * k_ratios.size() + col);
  }
};

/// Total error with class 2 set to (m1 * m_ratio, k1 * k_ratio) on a grid.
[[nodiscard]] ErrorSurface error_surface(const ModelConfig& base,
                                         std::span<const double> k_ratios,
                                         std::span<const double> m_ratios,
                                         double target = kDefaultAccuracy);

/// Matrix CSV: header `m_ratio\k_ratio,<k ratios...>`, one row per mass
/// ratio, cells log10(max(error, target)).
void write_surface_csv(std::ostream& out, const ErrorSurface& surface);

}  // namespace intruder
