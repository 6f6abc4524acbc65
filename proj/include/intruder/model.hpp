// ============================================================================
// model.hpp -- intruder dynamics and the sampled covariance they imply
//
// An intruder's speed deviation x(t) obeys m dx/dt = -k x + w with white
// noise w of intensity q. Sampled every T seconds, the deviation sequence is
// zero-mean Gaussian with covariance alpha * rho^|i-j|, where
//   alpha = q / (2 k m),   rho = exp(-(k/m) T).
// ============================================================================
#pragma once

#include <Eigen/Dense>

namespace intruder {

enum class ClassLabel : int { One = 1, Two = 2 };

[[nodiscard]] constexpr int to_int(ClassLabel label) noexcept {
  return static_cast<int>(label);
}

/// Throws ParameterError unless value is 1 or 2.
[[nodiscard]] ClassLabel label_from_int(int value);

[[nodiscard]] constexpr ClassLabel other(ClassLabel label) noexcept {
  return label == ClassLabel::One ? ClassLabel::Two : ClassLabel::One;
}

struct IntruderParams {
  double mass = 1.0;
  double gain = 1.0;  ///< feedback strength k
  ClassLabel label = ClassLabel::One;
};

/// Shared environmental disturbance; both classes see the same intensity.
struct NoiseSpec {
  double intensity = 1.0;
};

struct SamplingSpec {
  double period = 0.5;  ///< T, seconds
  int horizon = 20;     ///< k_f, number of samples
  double prior1 = 0.5;  ///< Pr(I = 1)

  [[nodiscard]] double prior2() const noexcept { return 1.0 - prior1; }
  [[nodiscard]] double prior(ClassLabel label) const noexcept {
    return label == ClassLabel::One ? prior1 : prior2();
  }
};

/// Stationary variance and one-step correlation of the sampled process.
struct ClassStatistics {
  double alpha = 1.0;
  double rho = 0.5;

  friend bool operator==(const ClassStatistics&, const ClassStatistics&) = default;
};

void validate(const IntruderParams& params);
void validate(const NoiseSpec& noise);
void validate(const SamplingSpec& sampling);
void validate(const ClassStatistics& stats);

/// Validated construction; requires alpha > 0 and 0 < rho < 1.
[[nodiscard]] ClassStatistics make_class_statistics(double alpha, double rho);

[[nodiscard]] ClassStatistics class_statistics(const IntruderParams& params,
                                               const NoiseSpec& noise,
                                               const SamplingSpec& sampling);

/// Dense k_f x k_f covariance. Used for oracles and diagnostics only; the
/// detection path works on the closed-form KMS structure instead.
[[nodiscard]] Eigen::MatrixXd covariance_matrix(const ClassStatistics& stats, int horizon);

/// R(tau) = q/(2km) exp(-(k/m)|tau|) of the continuous-time stationary response.
[[nodiscard]] double continuous_autocorrelation(const IntruderParams& params,
                                                const NoiseSpec& noise, double lag);

/// Complete parameter set for a two-class problem. Defaults are the
/// reference simulation study (k1=1, k2=3, m1=m2=1, q=1, k_f=20, T=0.5,
/// equal priors).
struct ModelConfig {
  IntruderParams class1{1.0, 1.0, ClassLabel::One};
  IntruderParams class2{1.0, 3.0, ClassLabel::Two};
  NoiseSpec noise{1.0};
  SamplingSpec sampling{0.5, 20, 0.5};

  void validate() const;
  [[nodiscard]] const IntruderParams& params(ClassLabel label) const noexcept {
    return label == ClassLabel::One ? class1 : class2;
  }
  [[nodiscard]] ClassStatistics statistics(ClassLabel label) const;
  /// Exchange the two classes (and their priors).
  [[nodiscard]] ModelConfig with_swapped_classes() const;
};

}  // namespace intruder
