// ============================================================================
// simulator.hpp -- synthetic velocity-deviation trajectories
//
// Trajectories use the exact AR(1) discretisation of the continuous model:
//   y[0]   ~ N(0, alpha)                      (stationary start)
//   y[k+1] = rho y[k] + e[k],  e[k] ~ N(0, alpha (1 - rho^2))
// so the sampled joint law is exactly the KMS covariance.
//
// Reproducibility contract: every trial i of a batch draws from its own
// mt19937_64 stream seeded with splitmix64(seed, i); normal variates come
// from the Marsaglia polar method on 53-bit uniforms. Both are fully
// specified here, so archived CSV fixtures do not depend on the standard
// library's distribution implementations.
// ============================================================================
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "intruder/model.hpp"

namespace intruder {

struct MeasurementSeries {
  std::vector<double> samples;
  double period = 1.0;

  [[nodiscard]] std::size_t size() const noexcept { return samples.size(); }
};

struct Trial {
  std::size_t index = 0;
  ClassLabel label = ClassLabel::One;
  MeasurementSeries series;
};

struct TrialBatch {
  std::vector<Trial> trials;
  std::uint64_t seed = 0;

  [[nodiscard]] std::size_t count(ClassLabel label) const noexcept;
  [[nodiscard]] std::vector<MeasurementSeries> series_of(ClassLabel label) const;
};

/// Seed of the independent stream `stream` derived from a master seed.
[[nodiscard]] std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : engine_{seed} {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal, Marsaglia polar method.
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

[[nodiscard]] MeasurementSeries simulate_trajectory(const ClassStatistics& stats, int horizon,
                                                    GaussianSource& source, double period = 1.0);
[[nodiscard]] MeasurementSeries simulate_trajectory(const ClassStatistics& stats, int horizon,
                                                    std::uint64_t seed, double period = 1.0);

/// Prior-weighted class draw followed by a trajectory, per trial.
[[nodiscard]] TrialBatch simulate_batch(const ModelConfig& config, std::size_t n_trials,
                                        std::uint64_t seed);

/// Subtract the sample mean of a raw speed segment, leaving the deviation.
[[nodiscard]] MeasurementSeries remove_mean(const MeasurementSeries& raw);

/// CSV with header `trial,label,k,y`, one row per sample.
void write_trials_csv(std::ostream& out, const TrialBatch& batch);

/// Reads the CSV written by write_trials_csv. Rows of one trial must be
/// contiguous and ordered by k starting at 0.
[[nodiscard]] TrialBatch read_trials_csv(std::istream& in, double period);

}  // namespace intruder
