// ============================================================================
// detector.hpp -- MAP classification of a velocity-deviation series
//
// Decide class 1 when y^T Q y <= z with Q = Sigma1^-1 - Sigma2^-1 and
//   z = 2 ln(p1/p2) + ln|Sigma2| - ln|Sigma1|.
// Because both covariances are KMS matrices the statistic collapses to
//   a s0 + b s1 + c (y_0^2 + y_{n-1}^2)
// over the running sums in SufficientStatistics, which is what the
// simplified and streaming paths evaluate.
// ============================================================================
#pragma once

#include <span>
#include <vector>

#include "intruder/model.hpp"
#include "intruder/simulator.hpp"
#include "intruder/sufficient_statistics.hpp"

namespace intruder {

struct DetectorSpec {
  ClassStatistics stats1;
  ClassStatistics stats2;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double log_prior_ratio = 0.0;  ///< ln(p1/p2)
  int horizon = 1;

  /// Q == 0: the data carry no information and the priors decide.
  [[nodiscard]] bool identical_classes() const noexcept { return a == 0.0 && b == 0.0 && c == 0.0; }
};

struct DetectionReport {
  ClassLabel decision = ClassLabel::One;
  double statistic = 0.0;
  double threshold = 0.0;
  double margin = 0.0;  ///< threshold - statistic
  double conditional_error = 0.5;
  std::size_t samples_used = 0;
};

struct RocPoint {
  double threshold = 0.0;
  double false_positive_rate = 0.0;  ///< class-2 trials declared class 1
  double true_positive_rate = 0.0;   ///< class-1 trials declared class 1
};

[[nodiscard]] DetectorSpec build_detector(const ClassStatistics& stats1,
                                          const ClassStatistics& stats2, double prior1,
                                          int horizon);
[[nodiscard]] DetectorSpec build_detector(const ModelConfig& config);

/// Closed-form threshold, linear in the horizon.
[[nodiscard]] double threshold(const DetectorSpec& spec, int horizon);
/// Same threshold through the KMS log-determinants; a second route for checks.
[[nodiscard]] double threshold_via_logdet(const DetectorSpec& spec, int horizon);

/// y^T Sigma1^-1 y - y^T Sigma2^-1 y against z(len(y)).
[[nodiscard]] DetectionReport detect_full(const DetectorSpec& spec, std::span<const double> y);
/// a s0 + b s1 + c (first^2 + last^2) against z(count).
[[nodiscard]] DetectionReport detect_simplified(const DetectorSpec& spec,
                                                const SufficientStatistics& stats);

/// Posterior probability that the decision is wrong: 1 / (1 + e^{|z - s|/2}).
[[nodiscard]] double conditional_error(double statistic, double threshold);
[[nodiscard]] double conditional_error(const DetectorSpec& spec, double statistic, int horizon);

/// Empirical ROC over absolute thresholds on the statistic. Positive means
/// "declared class 1", so TPR is non-decreasing in the threshold.
[[nodiscard]] std::vector<RocPoint> roc_sweep(const DetectorSpec& spec, const TrialBatch& batch,
                                              std::span<const double> thresholds);

/// Moment-matched (alpha, rho) from archived series of one class:
/// alpha = pooled lag-0 autocorrelation, rho = pooled lag-1 over lag-0,
/// each lag averaged over the sample pairs it actually has.
[[nodiscard]] ClassStatistics fit_class_statistics(std::span<const MeasurementSeries> series_set);

inline constexpr double kFitRhoClamp = 1e-6;

}  // namespace intruder
