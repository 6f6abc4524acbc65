#pragma once

#include <cstddef>
#include <span>

namespace intruder {

/// Running sums that carry everything the detector needs from a series:
///   s0 = sum y_i^2,  s1 = sum y_i y_{i+1},  plus the first and last sample.
/// A default-constructed value is the empty state (count() == 0) that a
/// stream starts from.
class SufficientStatistics {
 public:
  SufficientStatistics() = default;

  /// Batch construction; bit-identical to pushing the samples one at a time.
  [[nodiscard]] static SufficientStatistics from_series(std::span<const double> samples);

  /// O(1) append of the next sample.
  void push(double y) noexcept;

  [[nodiscard]] double s0() const noexcept { return s0_; }
  [[nodiscard]] double s1() const noexcept { return s1_; }
  [[nodiscard]] double first() const noexcept { return first_; }
  [[nodiscard]] double last() const noexcept { return last_; }
  [[nodiscard]] double first_sq() const noexcept { return first_ * first_; }
  [[nodiscard]] double last_sq() const noexcept { return last_ * last_; }
  [[nodiscard]] std::size_t count() const noexcept { return count_; }
  [[nodiscard]] bool empty() const noexcept { return count_ == 0; }

  friend bool operator==(const SufficientStatistics&, const SufficientStatistics&) = default;

 private:
  double s0_ = 0.0;
  double s1_ = 0.0;
  double first_ = 0.0;
  double last_ = 0.0;
  std::size_t count_ = 0;
};

[[nodiscard]] inline SufficientStatistics stream_update(SufficientStatistics state, double y_next) noexcept {
  state.push(y_next);
  return state;
}

}  // namespace intruder
