#include "intruder/error_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "intruder/errors.hpp"
#include "intruder/format.hpp"
#include "intruder/kms.hpp"

namespace intruder {

namespace {

constexpr double kPi = std::numbers::pi;

/// ceil(exp(log_value)) saturated to the int64 range.
std::int64_t ceil_from_log(double log_value) {
  constexpr double kLogLimit = 43.6;  // ln(2^63) ~ 43.67
  if (!(log_value < kLogLimit)) return std::numeric_limits<std::int64_t>::max();
  return static_cast<std::int64_t>(std::ceil(std::exp(log_value)));
}

/// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

CdfValue point_mass_at_zero(double z) {
  const double p = z >= 0.0 ? 1.0 : 0.0;
  return {p, p};
}

}  // namespace

QuadFormSpectrum q_sigma_eigenvalues(const ClassStatistics& stats1, const ClassStatistics& stats2,
                                     int horizon, ClassLabel hypothesis) {
  if (horizon < 1) throw ParameterError("horizon must be at least 1");
  const auto n = static_cast<std::size_t>(horizon);
  const KmsMatrix sigma1(stats1, n);
  const KmsMatrix sigma2(stats2, n);
  const KmsMatrix& sigma_h = hypothesis == ClassLabel::One ? sigma1 : sigma2;

  const Eigen::MatrixXd factor = kms_cholesky_factor(sigma_h);
  Eigen::MatrixXd q_factor(factor.rows(), factor.cols());
  for (Eigen::Index j = 0; j < factor.cols(); ++j) {
    const std::span<const double> column(factor.col(j).data(), n);
    const auto w1 = kms_inverse_apply(sigma1, column);
    const auto w2 = kms_inverse_apply(sigma2, column);
    for (std::size_t i = 0; i < n; ++i) {
      q_factor(static_cast<Eigen::Index>(i), j) = w1[i] - w2[i];
    }
  }
  Eigen::MatrixXd similar = factor.transpose() * q_factor;
  similar = 0.5 * (similar + similar.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(similar, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigenvalue decomposition of L^T Q L failed");
  }
  QuadFormSpectrum spectrum;
  spectrum.horizon = horizon;
  spectrum.eigenvalues.assign(solver.eigenvalues().data(),
                              solver.eigenvalues().data() + solver.eigenvalues().size());
  for (double lambda : spectrum.eigenvalues) {
    if (!std::isfinite(lambda)) throw NumericalError("non-finite eigenvalue of Q Sigma");
  }
  return spectrum;
}

std::complex<double> characteristic_function(const QuadFormSpectrum& spectrum, double omega) {
  double log_magnitude = 0.0;
  double phase = 0.0;
  for (double lambda : spectrum.eigenvalues) {
    const double x = 2.0 * omega * lambda;
    log_magnitude -= 0.25 * std::log1p(x * x);
    phase += 0.5 * std::atan(x);
  }
  return std::polar(std::exp(log_magnitude), phase);
}

std::vector<double> effective_eigenvalues(const QuadFormSpectrum& spectrum) {
  double largest = 0.0;
  for (double lambda : spectrum.eigenvalues) largest = std::max(largest, std::abs(lambda));
  std::vector<double> kept;
  if (largest == 0.0) return kept;
  const double cutoff = kEigenDropRatio * largest;
  for (double lambda : spectrum.eigenvalues) {
    if (std::abs(lambda) >= cutoff) kept.push_back(lambda);
  }
  return kept;
}

AccuracyBudget accuracy_budget(const QuadFormSpectrum& spectrum, double z, double target,
                               std::int64_t max_terms) {
  if (!(target > 0.0 && target < 1.0)) {
    throw ParameterError("accuracy target must lie strictly between 0 and 1");
  }
  if (max_terms < 1) throw ParameterError("max_terms must be positive");
  const auto lambdas = effective_eigenvalues(spectrum);
  if (lambdas.empty()) {
    throw ParameterError("all-zero spectrum: error is fixed by the priors, no budget applies");
  }

  AccuracyBudget budget;
  budget.target = target;
  budget.effective_dim = static_cast<int>(lambdas.size());
  budget.lambda_max = 0.0;
  budget.lambda_min = std::numeric_limits<double>::infinity();
  for (double lambda : lambdas) {
    budget.lambda_max = std::max(budget.lambda_max, std::abs(lambda));
    budget.lambda_min = std::min(budget.lambda_min, std::abs(lambda));
  }
  budget.drop_threshold = kEigenDropRatio * budget.lambda_max;

  // Resolution: Chernoff bounds on both tails at distance 2 pi / D from z.
  const double t = 1.0 / (4.0 * budget.lambda_max);
  double log_lower = z * t;
  double log_upper = -z * t;
  for (double lambda : lambdas) {
    log_lower -= 0.5 * std::log1p(2.0 * t * lambda);
    log_upper -= 0.5 * std::log1p(-2.0 * t * lambda);
  }
  const double log_theta = std::max(log_lower, log_upper);
  const double half_target = 0.5 * target;
  budget.t = t;
  budget.theta = std::exp(log_theta);
  budget.delta = 2.0 * kPi * t / (log_theta - std::log(half_target));
  if (!(budget.delta > 0.0) || !std::isfinite(budget.delta)) {
    throw NumericalError("frequency spacing is not a positive finite number");
  }
  budget.resolution_bound = std::exp(log_theta - 2.0 * kPi * t / budget.delta);

  // Truncation: N from the tail bound (2/(r pi)) (2 N D |lambda_min|)^(-r/2).
  const double r = budget.effective_dim;
  const double log_base = -std::log(2.0 * budget.delta * budget.lambda_min);
  budget.n_terms_main = ceil_from_log(log_base - (2.0 / r) * std::log(kPi / 4.0 * target * r));
  budget.n_terms_appendix = ceil_from_log(log_base - (2.0 / r) * std::log(r * kPi / 2.0 * target));
  const std::int64_t required = std::max({budget.n_terms_main, budget.n_terms_appendix,
                                          std::int64_t{1}});
  budget.capped = required > max_terms;
  budget.n_terms = std::min(required, max_terms);
  budget.truncation_bound =
      std::exp(std::log(2.0 / (r * kPi)) -
               0.5 * r *
                   std::log(2.0 * static_cast<double>(budget.n_terms) * budget.delta *
                            budget.lambda_min));
  return budget;
}

CdfValue cdf_quadratic_form(const QuadFormSpectrum& spectrum, double z, double delta,
                            std::int64_t n_terms) {
  const auto lambdas = effective_eigenvalues(spectrum);
  if (lambdas.empty()) return point_mass_at_zero(z);
  if (!(delta > 0.0) || n_terms < 0) throw ParameterError("invalid series spacing or length");

  CompensatedSum sum;
  for (std::int64_t i = 0; i <= n_terms; ++i) {
    const double half_index = static_cast<double>(i) + 0.5;
    const double u = delta * half_index;
    // Phase as a sum of half-angles; magnitude as a product of factors <= 1,
    // which cannot overflow and only underflows once the term is negligible.
    double magnitude = 1.0;
    double phase = 0.0;
    for (double lambda : lambdas) {
      const double x = 2.0 * u * lambda;
      magnitude /= std::sqrt(std::sqrt(1.0 + x * x));
      phase += 0.5 * std::atan(x);
    }
    // Im[phi(u) e^{-j z u}] = |phi(u)| sin(arg phi(u) - z u)
    sum.add(magnitude * std::sin(phase - z * u) / (kPi * half_index));
  }
  const double unclamped = 0.5 - sum.value();
  if (!std::isfinite(unclamped)) throw NumericalError("CDF series diverged");
  return {std::clamp(unclamped, 0.0, 1.0), unclamped};
}

CdfValue cdf_quadratic_form(const QuadFormSpectrum& spectrum, double z,
                            const AccuracyBudget& budget) {
  return cdf_quadratic_form(spectrum, z, budget.delta, budget.n_terms);
}

ErrorReport total_error(const ModelConfig& config, double target, std::int64_t max_terms) {
  config.validate();
  const DetectorSpec spec = build_detector(config);
  const int horizon = config.sampling.horizon;

  ErrorReport report;
  report.prior1 = config.sampling.prior1;
  report.prior2 = config.sampling.prior2();
  report.horizon = horizon;
  report.threshold = threshold(spec, horizon);
  const double z = report.threshold;

  QuadFormSpectrum spectrum1;
  QuadFormSpectrum spectrum2;
  if (!spec.identical_classes()) {
    spectrum1 = q_sigma_eigenvalues(spec.stats1, spec.stats2, horizon, ClassLabel::One);
    spectrum2 = q_sigma_eigenvalues(spec.stats1, spec.stats2, horizon, ClassLabel::Two);
  }
  report.degenerate =
      effective_eigenvalues(spectrum1).empty() || effective_eigenvalues(spectrum2).empty();

  CdfValue cdf1;
  CdfValue cdf2;
  if (report.degenerate) {
    cdf1 = point_mass_at_zero(z);
    cdf2 = point_mass_at_zero(z);
  } else {
    report.budget1 = accuracy_budget(spectrum1, z, target, max_terms);
    report.budget2 = accuracy_budget(spectrum2, z, target, max_terms);
    cdf1 = cdf_quadratic_form(spectrum1, z, report.budget1);
    cdf2 = cdf_quadratic_form(spectrum2, z, report.budget2);
  }
  report.unclamped_cdf1 = cdf1.unclamped;
  report.unclamped_cdf2 = cdf2.unclamped;
  report.miss_given_1 = 1.0 - cdf1.probability;
  report.miss_given_2 = cdf2.probability;
  report.total_error = report.prior2 * report.miss_given_2 + report.prior1 * report.miss_given_1;
  return report;
}

ErrorSurface error_surface(const ModelConfig& base, std::span<const double> k_ratios,
                           std::span<const double> m_ratios, double target) {
  base.validate();
  ErrorSurface surface;
  surface.k_ratios.assign(k_ratios.begin(), k_ratios.end());
  surface.m_ratios.assign(m_ratios.begin(), m_ratios.end());
  surface.target = target;
  for (double r : surface.k_ratios) {
    if (!(r > 0.0)) throw ParameterError("surface gain ratios must be positive");
  }
  for (double r : surface.m_ratios) {
    if (!(r > 0.0)) throw ParameterError("surface mass ratios must be positive");
  }
  surface.errors.reserve(k_ratios.size() * m_ratios.size());
  for (double m_ratio : surface.m_ratios) {
    for (double k_ratio : surface.k_ratios) {
      ModelConfig cell = base;
      cell.class2.mass = base.class1.mass * m_ratio;
      cell.class2.gain = base.class1.gain * k_ratio;
      surface.errors.push_back(total_error(cell, target).total_error);
    }
  }
  return surface;
}

void write_surface_csv(std::ostream& out, const ErrorSurface& surface) {
  out << "m_ratio\\k_ratio";
  for (double k : surface.k_ratios) out << ',' << format_number(k);
  out << '\n';
  for (std::size_t row = 0; row < surface.m_ratios.size(); ++row) {
    out << format_number(surface.m_ratios[row]);
    for (std::size_t col = 0; col < surface.k_ratios.size(); ++col) {
      out << ',' << format_number(std::log10(std::max(surface.at(row, col), surface.target)));
    }
    out << '\n';
  }
}

}  // namespace intruder
