// Dense-matrix oracles and random generators shared by the unit tests.
// Nothing here uses the KMS closed forms, so the tests stay independent of
// the code paths they check.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "intruder/model.hpp"

namespace intruder::testing {

inline Eigen::MatrixXd dense_sigma(const ClassStatistics& s, int n) {
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = s.alpha * std::pow(s.rho, std::abs(i - j));
  }
  return m;
}

inline Eigen::MatrixXd dense_inverse(const ClassStatistics& s, int n) {
  return dense_sigma(s, n).fullPivLu().inverse();
}

inline Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline double relative_error(double actual, double expected) {
  return std::abs(actual - expected) / std::max(1.0, std::abs(expected));
}

/// Random but well-conditioned class statistics.
class RandomModels {
 public:
  explicit RandomModels(std::uint64_t seed) : engine_{seed} {}

  ClassStatistics stats() {
    std::uniform_real_distribution<double> alpha(0.05, 3.0);
    std::uniform_real_distribution<double> rho(0.02, 0.95);
    return {alpha(engine_), rho(engine_)};
  }

  std::vector<double> vector(std::size_t n, double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    std::vector<double> v(n);
    for (double& x : v) x = normal(engine_);
    return v;
  }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace intruder::testing
