#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "intruder/errors.hpp"
#include "intruder/simulator.hpp"

namespace intruder {
namespace {

struct Moments {
  double lag0 = 0.0;
  double lag1 = 0.0;
};

Moments first_pair_moments(const ClassStatistics& s, int n_draws, std::uint64_t seed) {
  Moments m;
  for (int i = 0; i < n_draws; ++i) {
    const auto y = simulate_trajectory(s, 2, derive_stream_seed(seed, i)).samples;
    m.lag0 += y[0] * y[0];
    m.lag1 += y[0] * y[1];
  }
  m.lag0 /= n_draws;
  m.lag1 /= n_draws;
  return m;
}

TEST(GaussianSource, StandardNormalMoments) {
  GaussianSource source(7);
  constexpr int n = 200000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = source.normal();
    sum += x;
    sum_sq += x * x;
  }
  EXPECT_NEAR(sum / n, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(sum_sq / n, 1.0, 4.0 * std::sqrt(2.0 / n));
}

TEST(SimulateTrajectory, LagZeroAndLagOneCovariance) {
  const ClassStatistics s{0.5, std::exp(-0.5)};
  constexpr int n = 100000;
  const auto m = first_pair_moments(s, n, 21);
  EXPECT_NEAR(m.lag0, s.alpha, 3.0 * s.alpha * std::sqrt(2.0 / n));
  EXPECT_NEAR(m.lag1, s.alpha * s.rho, 3.0 * s.alpha * std::sqrt((1.0 + s.rho * s.rho) / n));
}

TEST(SimulateTrajectory, NearWhiteSequenceIsUncorrelated) {
  const ClassStatistics s{1.0, 1e-9};
  constexpr int n = 100000;
  const auto m = first_pair_moments(s, n, 22);
  EXPECT_NEAR(m.lag1 / m.lag0, 0.0, 3.0 / std::sqrt(n));
}

TEST(SimulateTrajectory, ExactTwoByTwoCovariance) {
  const ClassStatistics s{1.0 / 6.0, std::exp(-1.5)};
  constexpr int n = 1000000;
  double c00 = 0.0;
  double c01 = 0.0;
  double c11 = 0.0;
  GaussianSource source(23);
  for (int i = 0; i < n; ++i) {
    const auto y = simulate_trajectory(s, 2, source).samples;
    c00 += y[0] * y[0];
    c01 += y[0] * y[1];
    c11 += y[1] * y[1];
  }
  c00 /= n;
  c01 /= n;
  c11 /= n;
  const double a = s.alpha;
  EXPECT_NEAR(c00, a, 4.0 * a * std::sqrt(2.0 / n));
  EXPECT_NEAR(c11, a, 4.0 * a * std::sqrt(2.0 / n));
  EXPECT_NEAR(c01, a * s.rho, 4.0 * a * std::sqrt((1.0 + s.rho * s.rho) / n));
}

TEST(SimulateTrajectory, StationaryVarianceAtEveryIndex) {
  const ClassStatistics s{0.5, 0.9};
  constexpr int n = 40000;
  constexpr int horizon = 15;
  std::vector<double> var(horizon, 0.0);
  for (int i = 0; i < n; ++i) {
    const auto y = simulate_trajectory(s, horizon, derive_stream_seed(24, i)).samples;
    for (int k = 0; k < horizon; ++k) var[k] += y[k] * y[k];
  }
  for (int k = 0; k < horizon; ++k) {
    EXPECT_NEAR(var[k] / n, s.alpha, 4.0 * s.alpha * std::sqrt(2.0 / n)) << "k=" << k;
  }
}

TEST(SimulateTrajectory, DeterministicAndValidated) {
  const ClassStatistics s{0.5, 0.6};
  EXPECT_EQ(simulate_trajectory(s, 30, 99).samples, simulate_trajectory(s, 30, 99).samples);
  EXPECT_NE(simulate_trajectory(s, 30, 99).samples, simulate_trajectory(s, 30, 100).samples);
  EXPECT_THROW((void)simulate_trajectory(s, 0, 1), ParameterError);
}

TEST(SimulateBatch, ClassCountsFollowPrior) {
  const ModelConfig config;
  const auto batch = simulate_batch(config, 500, 5);
  ASSERT_EQ(batch.trials.size(), 500u);
  // Binomial(500, 0.5) two-sided 99.9% interval: 250 +- 3.29 sqrt(125).
  const auto n1 = static_cast<double>(batch.count(ClassLabel::One));
  EXPECT_GE(n1, 214.0);
  EXPECT_LE(n1, 286.0);
  EXPECT_EQ(batch.count(ClassLabel::One) + batch.count(ClassLabel::Two), 500u);
  for (std::size_t i = 0; i < batch.trials.size(); ++i) {
    EXPECT_EQ(batch.trials[i].index, i);
    EXPECT_EQ(batch.trials[i].series.size(), 20u);
  }
}

TEST(SimulateBatch, SameSeedSameBatch) {
  const ModelConfig config;
  const auto a = simulate_batch(config, 50, 77);
  const auto b = simulate_batch(config, 50, 77);
  for (std::size_t i = 0; i < a.trials.size(); ++i) {
    EXPECT_EQ(a.trials[i].label, b.trials[i].label);
    EXPECT_EQ(a.trials[i].series.samples, b.trials[i].series.samples);
  }
  // A prefix of a larger batch is the smaller batch: trials own their streams.
  const auto longer = simulate_batch(config, 80, 77);
  EXPECT_EQ(longer.trials[49].series.samples, a.trials[49].series.samples);
}

TEST(SimulateBatch, RejectsDegeneratePrior) {
  ModelConfig config;
  config.sampling.prior1 = 1.0;
  EXPECT_THROW((void)simulate_batch(config, 10, 1), ParameterError);
  EXPECT_THROW((void)simulate_batch(ModelConfig{}, 0, 1), ParameterError);
}

TEST(DeriveStreamSeed, DistinctStreams) {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 4; ++s) {
    for (std::uint64_t i = 0; i < 1000; ++i) seeds.insert(derive_stream_seed(s, i));
  }
  EXPECT_EQ(seeds.size(), 4000u);
}

TEST(TrialsCsv, RoundTripIsExact) {
  const auto batch = simulate_batch(ModelConfig{}, 25, 3);
  std::stringstream csv;
  write_trials_csv(csv, batch);
  const auto back = read_trials_csv(csv, 0.5);
  ASSERT_EQ(back.trials.size(), batch.trials.size());
  for (std::size_t i = 0; i < batch.trials.size(); ++i) {
    EXPECT_EQ(back.trials[i].index, batch.trials[i].index);
    EXPECT_EQ(back.trials[i].label, batch.trials[i].label);
    EXPECT_EQ(back.trials[i].series.samples, batch.trials[i].series.samples);
  }
}

TEST(TrialsCsv, RejectsMalformedInput) {
  const auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_trials_csv(in, 0.5);
  };
  EXPECT_THROW((void)parse(""), ParameterError);
  EXPECT_THROW((void)parse("trial,y\n"), ParameterError);
  EXPECT_THROW((void)parse("trial,label,k,y\n0,3,0,1.0\n"), ParameterError);
  EXPECT_THROW((void)parse("trial,label,k,y\n0,1,1,1.0\n"), ParameterError);
  EXPECT_THROW((void)parse("trial,label,k,y\n0,1,0,abc\n"), ParameterError);
  EXPECT_THROW((void)parse("trial,label,k,y\n0,1,0,1.0\n0,2,1,1.0\n"), ParameterError);
  EXPECT_THROW((void)parse("trial,label,k,y\n0,1,0\n"), ParameterError);
  EXPECT_EQ(parse("trial,label,k,y\r\n0,1,0,1.5\r\n").trials.at(0).series.samples.at(0), 1.5);
}

TEST(RemoveMean, CentersSegment) {
  const MeasurementSeries raw{{10.0, 12.0, 11.0, 13.0}, 0.5};
  const auto centred = remove_mean(raw);
  EXPECT_DOUBLE_EQ(centred.samples[0], -1.5);
  EXPECT_DOUBLE_EQ(centred.samples[3], 1.5);
  EXPECT_THROW((void)remove_mean(MeasurementSeries{}), ParameterError);
}

}  // namespace
}  // namespace intruder
