#include "intruder/sufficient_statistics.hpp"

namespace intruder {

SufficientStatistics SufficientStatistics::from_series(std::span<const double> samples) {
  SufficientStatistics stats;
  if (samples.empty()) return stats;
  stats.first_ = samples.front();
  stats.last_ = samples.back();
  stats.count_ = samples.size();
  double s0 = 0.0;
  double s1 = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    s0 += samples[i] * samples[i];
    if (i > 0) s1 += samples[i - 1] * samples[i];
  }
  stats.s0_ = s0;
  stats.s1_ = s1;
  return stats;
}

void SufficientStatistics::push(double y) noexcept {
  if (count_ == 0) {
    first_ = y;
  } else {
    s1_ += last_ * y;
  }
  s0_ += y * y;
  last_ = y;
  ++count_;
}

}  // namespace intruder
