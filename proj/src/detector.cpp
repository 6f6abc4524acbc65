#include "intruder/detector.hpp"

#include <algorithm>
#include <cmath>

#include "intruder/errors.hpp"
#include "intruder/kms.hpp"

namespace intruder {

namespace {

DetectionReport make_report(double statistic, double z, std::size_t samples) {
  DetectionReport report;
  report.statistic = statistic;
  report.threshold = z;
  report.margin = z - statistic;
  report.decision = statistic <= z ? ClassLabel::One : ClassLabel::Two;
  report.conditional_error = conditional_error(statistic, z);
  report.samples_used = samples;
  return report;
}

}  // namespace

DetectorSpec build_detector(const ClassStatistics& stats1, const ClassStatistics& stats2,
                            double prior1, int horizon) {
  validate(stats1);
  validate(stats2);
  if (!(prior1 > 0.0 && prior1 < 1.0)) {
    throw ParameterError("prior1 must lie strictly between 0 and 1");
  }
  if (horizon < 1) throw ParameterError("horizon must be at least 1");

  const auto inv_scale = [](const ClassStatistics& s) {
    return 1.0 / (s.alpha * (1.0 - s.rho * s.rho));
  };
  const double g1 = inv_scale(stats1);
  const double g2 = inv_scale(stats2);

  DetectorSpec spec;
  spec.stats1 = stats1;
  spec.stats2 = stats2;
  spec.a = (1.0 + stats1.rho * stats1.rho) * g1 - (1.0 + stats2.rho * stats2.rho) * g2;
  spec.b = 2.0 * stats2.rho * g2 - 2.0 * stats1.rho * g1;
  spec.c = stats2.rho * stats2.rho * g2 - stats1.rho * stats1.rho * g1;
  spec.log_prior_ratio = std::log(prior1) - std::log1p(-prior1);
  spec.horizon = horizon;
  return spec;
}

DetectorSpec build_detector(const ModelConfig& config) {
  return build_detector(config.statistics(ClassLabel::One), config.statistics(ClassLabel::Two),
                        config.sampling.prior1, config.sampling.horizon);
}

double threshold(const DetectorSpec& spec, int horizon) {
  if (horizon < 1) throw ParameterError("horizon must be at least 1");
  const double n = horizon;
  const double r1 = spec.stats1.rho;
  const double r2 = spec.stats2.rho;
  return 2.0 * spec.log_prior_ratio + n * std::log(spec.stats2.alpha / spec.stats1.alpha) +
         (n - 1.0) * (std::log1p(-r2 * r2) - std::log1p(-r1 * r1));
}

double threshold_via_logdet(const DetectorSpec& spec, int horizon) {
  if (horizon < 1) throw ParameterError("horizon must be at least 1");
  const auto n = static_cast<std::size_t>(horizon);
  return 2.0 * spec.log_prior_ratio + kms_logdet(KmsMatrix(spec.stats2, n)) -
         kms_logdet(KmsMatrix(spec.stats1, n));
}

DetectionReport detect_full(const DetectorSpec& spec, std::span<const double> y) {
  if (y.empty()) throw ParameterError("cannot classify an empty series");
  const KmsMatrix sigma1(spec.stats1, y.size());
  const KmsMatrix sigma2(spec.stats2, y.size());
  const double statistic = kms_quadratic_form(sigma1, y) - kms_quadratic_form(sigma2, y);
  return make_report(statistic, threshold(spec, static_cast<int>(y.size())), y.size());
}

DetectionReport detect_simplified(const DetectorSpec& spec, const SufficientStatistics& stats) {
  if (stats.empty()) throw ParameterError("cannot classify an empty series");
  const double statistic =
      spec.a * stats.s0() + spec.b * stats.s1() + spec.c * (stats.first_sq() + stats.last_sq());
  return make_report(statistic, threshold(spec, static_cast<int>(stats.count())), stats.count());
}

double conditional_error(double statistic, double threshold) {
  // 1/(1 + 1/r) with r = exp(-|z - s|/2).
  return 1.0 / (1.0 + std::exp(0.5 * std::abs(threshold - statistic)));
}

double conditional_error(const DetectorSpec& spec, double statistic, int horizon) {
  return conditional_error(statistic, threshold(spec, horizon));
}

std::vector<RocPoint> roc_sweep(const DetectorSpec& spec, const TrialBatch& batch,
                                std::span<const double> thresholds) {
  const std::size_t n1 = batch.count(ClassLabel::One);
  const std::size_t n2 = batch.count(ClassLabel::Two);
  if (n1 == 0 || n2 == 0) throw ParameterError("ROC sweep needs trials of both classes");

  std::vector<double> stats1;
  std::vector<double> stats2;
  stats1.reserve(n1);
  stats2.reserve(n2);
  for (const auto& trial : batch.trials) {
    const double s =
        detect_simplified(spec, SufficientStatistics::from_series(trial.series.samples)).statistic;
    (trial.label == ClassLabel::One ? stats1 : stats2).push_back(s);
  }
  std::sort(stats1.begin(), stats1.end());
  std::sort(stats2.begin(), stats2.end());

  const auto fraction_at_or_below = [](const std::vector<double>& sorted, double t) {
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), t);
    return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
  };

  std::vector<RocPoint> curve;
  curve.reserve(thresholds.size());
  for (double t : thresholds) {
    curve.push_back({t, fraction_at_or_below(stats2, t), fraction_at_or_below(stats1, t)});
  }
  return curve;
}

ClassStatistics fit_class_statistics(std::span<const MeasurementSeries> series_set) {
  double lag0 = 0.0;
  double lag1 = 0.0;
  std::size_t samples = 0;
  std::size_t pairs = 0;
  for (const auto& series : series_set) {
    if (series.samples.empty()) continue;
    const auto stats = SufficientStatistics::from_series(series.samples);
    lag0 += stats.s0();
    lag1 += stats.s1();
    samples += stats.count();
    pairs += stats.count() - 1;
  }
  if (samples < 2) throw ParameterError("fitting needs at least two samples");
  if (pairs == 0) throw ParameterError("fitting needs at least one pair of consecutive samples");
  if (!(lag0 > 0.0)) throw ParameterError("degenerate archive: all samples are zero");

  const double r0 = lag0 / static_cast<double>(samples);
  const double r1 = lag1 / static_cast<double>(pairs);
  const double rho = std::clamp(r1 / r0, kFitRhoClamp, 1.0 - kFitRhoClamp);
  return make_class_statistics(r0, rho);
}

}  // namespace intruder
