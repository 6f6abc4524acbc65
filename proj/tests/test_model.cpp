#include <gtest/gtest.h>

#include <cmath>

#include "intruder/errors.hpp"
#include "intruder/model.hpp"

namespace intruder {
namespace {

const NoiseSpec kUnitNoise{1.0};
const SamplingSpec kTableSampling{0.5, 20, 0.5};

TEST(ClassStatistics, ReferenceClassOne) {
  const auto s = class_statistics({1.0, 1.0, ClassLabel::One}, kUnitNoise, kTableSampling);
  EXPECT_DOUBLE_EQ(s.alpha, 0.5);
  EXPECT_NEAR(s.rho, 0.6065306597126334, 1e-15);
}

TEST(ClassStatistics, ReferenceClassTwo) {
  const auto s = class_statistics({1.0, 3.0, ClassLabel::Two}, kUnitNoise, kTableSampling);
  EXPECT_NEAR(s.alpha, 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(s.rho, std::exp(-1.5), 1e-15);
  EXPECT_NEAR(s.rho, 0.22313, 1e-5);
}

TEST(ClassStatistics, ShortPeriodApproachesOneFromBelow) {
  const auto s = class_statistics({1.0, 1.0, ClassLabel::One}, kUnitNoise, {1e-9, 5, 0.5});
  EXPECT_LT(s.rho, 1.0);
  EXPECT_GT(s.rho, 1.0 - 1e-8);
  EXPECT_DOUBLE_EQ(s.alpha, 0.5);
}

TEST(ClassStatistics, RejectsInvalidParameters) {
  const IntruderParams good{1.0, 1.0, ClassLabel::One};
  EXPECT_THROW((void)class_statistics({0.0, 1.0, ClassLabel::One}, kUnitNoise, kTableSampling),
               ParameterError);
  EXPECT_THROW((void)class_statistics({1.0, -1.0, ClassLabel::One}, kUnitNoise, kTableSampling),
               ParameterError);
  EXPECT_THROW((void)class_statistics(good, {0.0}, kTableSampling), ParameterError);
  EXPECT_THROW((void)class_statistics(good, kUnitNoise, {0.0, 20, 0.5}), ParameterError);
  EXPECT_THROW((void)class_statistics(good, kUnitNoise, {0.5, 0, 0.5}), ParameterError);
  EXPECT_THROW((void)class_statistics(good, kUnitNoise, {0.5, 20, 1.0}), ParameterError);
  // T so small that exp(-kT/m) rounds to exactly 1.
  EXPECT_THROW((void)class_statistics(good, kUnitNoise, {1e-18, 20, 0.5}), ParameterError);
}

TEST(CovarianceMatrix, SmallCases) {
  const ClassStatistics s{0.5, 0.6065};
  const auto one = covariance_matrix(s, 1);
  ASSERT_EQ(one.rows(), 1);
  EXPECT_DOUBLE_EQ(one(0, 0), 0.5);

  const auto two = covariance_matrix(s, 2);
  EXPECT_DOUBLE_EQ(two(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(two(1, 1), 0.5);
  EXPECT_NEAR(two(0, 1), 0.30325, 1e-12);
  EXPECT_EQ(two(0, 1), two(1, 0));
}

TEST(CovarianceMatrix, SymmetricToeplitzAndPositiveDefinite) {
  for (double rho : {0.01, 0.3, 0.6065, 0.95, 0.999}) {
    for (int n : {1, 2, 7, 20, 50}) {
      const auto sigma = covariance_matrix({1.7, rho}, n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          ASSERT_EQ(sigma(i, j), sigma(j, i));  // bitwise mirror
          if (i > 0 && j > 0) ASSERT_EQ(sigma(i, j), sigma(i - 1, j - 1));
        }
      }
      Eigen::LLT<Eigen::MatrixXd> llt(sigma);
      EXPECT_EQ(llt.info(), Eigen::Success) << "rho=" << rho << " n=" << n;
    }
  }
}

TEST(ContinuousAutocorrelation, ValuesAndSymmetry) {
  const IntruderParams p{1.0, 1.0, ClassLabel::One};
  EXPECT_DOUBLE_EQ(continuous_autocorrelation(p, kUnitNoise, 0.0), 0.5);
  EXPECT_DOUBLE_EQ(continuous_autocorrelation(p, kUnitNoise, -0.5),
                   continuous_autocorrelation(p, kUnitNoise, 0.5));
  EXPECT_NEAR(continuous_autocorrelation(p, kUnitNoise, 0.5), 0.5 * std::exp(-0.5), 1e-15);
}

TEST(ContinuousAutocorrelation, SampledMatchesCovarianceMatrix) {
  const IntruderParams p{1.3, 2.1, ClassLabel::One};
  const SamplingSpec sampling{0.4, 6, 0.5};
  const auto sigma = covariance_matrix(class_statistics(p, kUnitNoise, sampling), 6);
  for (int lag = 0; lag < 6; ++lag) {
    EXPECT_NEAR(continuous_autocorrelation(p, kUnitNoise, lag * sampling.period), sigma(0, lag),
                1e-14);
  }
}

TEST(ClassStatistics, ScalingProperties) {
  const IntruderParams p{1.4, 2.3, ClassLabel::One};
  const auto base = class_statistics(p, {0.8}, kTableSampling);
  const auto doubled_q = class_statistics(p, {1.6}, kTableSampling);
  EXPECT_NEAR(doubled_q.alpha, 2.0 * base.alpha, 1e-15);
  EXPECT_EQ(doubled_q.rho, base.rho);

  const double c = 3.0;
  const auto scaled = class_statistics({c * p.mass, c * p.gain, ClassLabel::One}, {0.8},
                                       kTableSampling);
  EXPECT_NEAR(scaled.rho, base.rho, 1e-15);
  EXPECT_NEAR(scaled.alpha, base.alpha / (c * c), 1e-15);
}

TEST(ModelConfig, DefaultsAndSwap) {
  const ModelConfig config;
  EXPECT_DOUBLE_EQ(config.class1.gain, 1.0);
  EXPECT_DOUBLE_EQ(config.class2.gain, 3.0);
  EXPECT_EQ(config.sampling.horizon, 20);

  ModelConfig skewed = config;
  skewed.sampling.prior1 = 0.3;
  const auto swapped = skewed.with_swapped_classes();
  EXPECT_DOUBLE_EQ(swapped.class1.gain, 3.0);
  EXPECT_DOUBLE_EQ(swapped.class2.gain, 1.0);
  EXPECT_DOUBLE_EQ(swapped.sampling.prior1, 0.7);
  EXPECT_EQ(swapped.class1.label, ClassLabel::One);
}

TEST(ClassLabel, Conversion) {
  EXPECT_EQ(label_from_int(1), ClassLabel::One);
  EXPECT_EQ(label_from_int(2), ClassLabel::Two);
  EXPECT_THROW((void)label_from_int(0), ParameterError);
  EXPECT_EQ(other(ClassLabel::One), ClassLabel::Two);
}

}  // namespace
}  // namespace intruder
