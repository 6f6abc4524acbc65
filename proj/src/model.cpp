#include "intruder/model.hpp"

#include <cmath>
#include <string>

#include "intruder/errors.hpp"

namespace intruder {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw ParameterError(message);
}

}  // namespace

ClassLabel label_from_int(int value) {
  require(value == 1 || value == 2, "class label must be 1 or 2, got " + std::to_string(value));
  return static_cast<ClassLabel>(value);
}

void validate(const IntruderParams& params) {
  require(std::isfinite(params.mass) && params.mass > 0.0, "intruder mass must be positive");
  require(std::isfinite(params.gain) && params.gain > 0.0, "intruder gain must be positive");
}

void validate(const NoiseSpec& noise) {
  require(std::isfinite(noise.intensity) && noise.intensity > 0.0,
          "noise intensity q must be positive");
}

void validate(const SamplingSpec& sampling) {
  require(std::isfinite(sampling.period) && sampling.period > 0.0,
          "sampling period T must be positive");
  require(sampling.horizon >= 1, "horizon k_f must be at least 1");
  require(sampling.prior1 > 0.0 && sampling.prior1 < 1.0,
          "prior1 must lie strictly between 0 and 1");
}

void validate(const ClassStatistics& stats) {
  require(std::isfinite(stats.alpha) && stats.alpha > 0.0, "alpha must be positive");
  require(stats.rho > 0.0 && stats.rho < 1.0, "rho must lie strictly between 0 and 1");
}

ClassStatistics make_class_statistics(double alpha, double rho) {
  ClassStatistics stats{alpha, rho};
  validate(stats);
  return stats;
}

ClassStatistics class_statistics(const IntruderParams& params, const NoiseSpec& noise,
                                 const SamplingSpec& sampling) {
  validate(params);
  validate(noise);
  validate(sampling);
  const double alpha = noise.intensity / (2.0 * params.gain * params.mass);
  const double rho = std::exp(-(params.gain / params.mass) * sampling.period);
  // rho rounds to 1 when T is negligible against the time constant m/k.
  require(rho < 1.0, "sampling period too small: correlation rounds to 1");
  require(rho > 0.0, "sampling period too large: correlation underflows to 0");
  return {alpha, rho};
}

Eigen::MatrixXd covariance_matrix(const ClassStatistics& stats, int horizon) {
  validate(stats);
  require(horizon >= 1, "horizon must be at least 1");
  Eigen::MatrixXd sigma(horizon, horizon);
  for (int lag = 0; lag < horizon; ++lag) {
    const double value = stats.alpha * std::pow(stats.rho, lag);
    for (int i = 0; i + lag < horizon; ++i) {
      sigma(i, i + lag) = value;
      sigma(i + lag, i) = value;
    }
  }
  return sigma;
}

double continuous_autocorrelation(const IntruderParams& params, const NoiseSpec& noise,
                                  double lag) {
  validate(params);
  validate(noise);
  return noise.intensity / (2.0 * params.gain * params.mass) *
         std::exp(-(params.gain / params.mass) * std::abs(lag));
}

void ModelConfig::validate() const {
  intruder::validate(class1);
  intruder::validate(class2);
  intruder::validate(noise);
  intruder::validate(sampling);
}

ClassStatistics ModelConfig::statistics(ClassLabel label) const {
  return class_statistics(params(label), noise, sampling);
}

ModelConfig ModelConfig::with_swapped_classes() const {
  ModelConfig swapped = *this;
  swapped.class1 = class2;
  swapped.class2 = class1;
  swapped.class1.label = ClassLabel::One;
  swapped.class2.label = ClassLabel::Two;
  swapped.sampling.prior1 = sampling.prior2();
  return swapped;
}

}  // namespace intruder
