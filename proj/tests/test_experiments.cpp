#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "intruder/config.hpp"
#include "intruder/experiments.hpp"

namespace intruder {
namespace {

namespace fs = std::filesystem;

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

// Every body cell parses as a finite number.
void expect_finite_body(const std::string& text) {
  const auto rows = parse_csv(text);
  ASSERT_GE(rows.size(), 2u);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    ASSERT_EQ(rows[r].size(), rows[0].size()) << "row " << r;
    for (const auto& cell : rows[r]) {
      std::size_t used = 0;
      const double v = std::stod(cell, &used);
      EXPECT_EQ(used, cell.size()) << cell;
      EXPECT_TRUE(std::isfinite(v)) << cell;
    }
  }
}

ExperimentConfig make(ExperimentKind kind, std::size_t n) {
  ExperimentConfig config;
  config.kind = kind;
  config.n_trials = n;
  config.seed = 5;
  return config;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

TEST(ExperimentNames, RoundTrip) {
  for (auto kind : {ExperimentKind::Scatter, ExperimentKind::Streaming, ExperimentKind::McVsExact,
                    ExperimentKind::Surface, ExperimentKind::HorizonSweep, ExperimentKind::Roc}) {
    EXPECT_EQ(experiment_from_string(to_string(kind)), kind);
  }
  EXPECT_EQ(default_trials(ExperimentKind::Scatter), 500u);
  EXPECT_EQ(default_trials(ExperimentKind::McVsExact), 5000u);
}

TEST(Scatter, ClassesFallOnTheirSide) {
  std::ostringstream csv;
  const auto summary = run_scatter(make(ExperimentKind::Scatter, 500), csv);
  const auto rows = parse_csv(csv.str());
  ASSERT_EQ(rows.size(), 501u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"trial", "label", "statistic", "z"}));
  const auto& c = summary.at("confusion");
  EXPECT_GT(c.at("true1_decided1").get<int>(), c.at("true1_decided2").get<int>());
  EXPECT_GT(c.at("true2_decided2").get<int>(), c.at("true2_decided1").get<int>());
  expect_finite_body(csv.str());
}

TEST(Scatter, SingleTrialIsValidCsv) {
  std::ostringstream csv;
  (void)run_scatter(make(ExperimentKind::Scatter, 1), csv);
  EXPECT_EQ(parse_csv(csv.str()).size(), 2u);
  expect_finite_body(csv.str());
}

TEST(Scatter, Deterministic) {
  std::ostringstream first;
  std::ostringstream second;
  (void)run_scatter(make(ExperimentKind::Scatter, 50), first);
  (void)run_scatter(make(ExperimentKind::Scatter, 50), second);
  EXPECT_EQ(first.str(), second.str());
}

TEST(Streaming, OneRowPerSample) {
  std::ostringstream csv;
  (void)run_streaming(make(ExperimentKind::Streaming, 1), csv);
  const auto rows = parse_csv(csv.str());
  EXPECT_EQ(rows.size(), 21u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"k", "y", "statistic", "z", "decision",
                                               "conditional_error"}));
  expect_finite_body(csv.str());
}

TEST(McVsExact, ConvergesAndReportsComponents) {
  std::ostringstream csv;
  const auto summary = run_mc_vs_exact(make(ExperimentKind::McVsExact, 5000), csv);
  EXPECT_TRUE(summary.at("within_3_se").get<bool>());
  const auto rows = parse_csv(csv.str());
  EXPECT_EQ(rows.size(), 51u);
  EXPECT_EQ(rows[0].size(), 9u);
  EXPECT_EQ(rows.back()[0], "5000");
  expect_finite_body(csv.str());
}

TEST(McVsExact, IdenticalClassesSitAtOneHalf) {
  auto config = make(ExperimentKind::McVsExact, 2000);
  config.model.class2.gain = config.model.class1.gain;
  std::ostringstream csv;
  const auto summary = run_mc_vs_exact(config, csv);
  EXPECT_EQ(summary.at("exact_error").get<double>(), 0.5);
  EXPECT_NEAR(summary.at("empirical_error").get<double>(), 0.5, 3.0 * std::sqrt(0.25 / 2000));
}

TEST(HorizonSweep, DecreasingWithLogLinearTrend) {
  auto config = make(ExperimentKind::HorizonSweep, 1);
  config.kf_values = {1, 5, 10, 20, 40};
  std::ostringstream csv;
  const auto summary = run_horizon_sweep(config, csv);
  const auto rows = parse_csv(csv.str());
  ASSERT_EQ(rows.size(), 6u);
  double previous = 0.5;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const double e = std::stod(rows[r][1]);
    EXPECT_LT(e, previous);
    previous = e;
  }
  EXPECT_LT(summary.at("log_error_slope_per_sample").get<double>(), 0.0);
}

TEST(HorizonSweep, InvariantToNoiseIntensity) {
  auto config = make(ExperimentKind::HorizonSweep, 1);
  config.kf_values = {3, 12};
  std::ostringstream base;
  (void)run_horizon_sweep(config, base);
  config.model.noise.intensity = 2.0;
  std::ostringstream doubled;
  (void)run_horizon_sweep(config, doubled);
  const auto a = parse_csv(base.str());
  const auto b = parse_csv(doubled.str());
  for (std::size_t r = 1; r < a.size(); ++r) {
    EXPECT_NEAR(std::stod(a[r][1]), std::stod(b[r][1]), 2e-6);
  }
}

TEST(Surface, ShapeAndDiagonal) {
  auto config = make(ExperimentKind::Surface, 1);
  std::ostringstream csv;
  (void)run_surface(config, csv);
  const auto rows = parse_csv(csv.str());
  ASSERT_EQ(rows.size(), 6u);
  ASSERT_EQ(rows[0].size(), 6u);
  EXPECT_NEAR(std::stod(rows[3][3]), std::log10(0.5), 1e-12);
}

TEST(Roc, MapPointNearExact) {
  std::ostringstream csv;
  const auto summary = run_roc(make(ExperimentKind::Roc, 5000), csv);
  EXPECT_NEAR(summary.at("map_false_positive_rate").get<double>(),
              summary.at("exact_false_positive_rate").get<double>(), 0.03);
  EXPECT_NEAR(summary.at("map_true_positive_rate").get<double>(),
              summary.at("exact_true_positive_rate").get<double>(), 0.03);
  expect_finite_body(csv.str());
}

TEST(FitLogLinear, ExactLine) {
  const std::vector<int> k{1, 2, 3, 4};
  const std::vector<double> e{std::exp(-1.0), std::exp(-1.5), std::exp(-2.0), std::exp(-2.5)};
  const auto fit = fit_log_linear(k, e);
  EXPECT_NEAR(fit.slope, -0.5, 1e-12);
  EXPECT_NEAR(fit.intercept, -0.5, 1e-12);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
}

TEST(Sha256, KnownDigest) {
  const auto p = fs::temp_directory_path() / "intruder_sha_test.txt";
  std::ofstream(p, std::ios::binary) << "abc";
  EXPECT_EQ(sha256_file(p), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  fs::remove(p);
}

TEST(RunExperiment, ManifestReproducesOutputs) {
  const auto dir = fs::temp_directory_path() / "intruder_manifest_test";
  fs::remove_all(dir);
  auto config = make(ExperimentKind::Scatter, 200);
  config.out_dir = dir / "first";
  const auto manifest = run_experiment(config);
  ASSERT_EQ(manifest.outputs.size(), 1u);
  const auto csv_path = config.out_dir / manifest.outputs[0].file;
  EXPECT_EQ(sha256_file(csv_path), manifest.outputs[0].sha256);
  EXPECT_EQ(fs::file_size(csv_path), manifest.outputs[0].bytes);
  ASSERT_TRUE(fs::exists(config.out_dir / "manifest.json"));

  auto replay = experiment_config_from_json(load_json_document(config.out_dir / "manifest.json"));
  replay.out_dir = dir / "second";
  const auto again = run_experiment(replay);
  EXPECT_EQ(again.outputs[0].sha256, manifest.outputs[0].sha256);
  EXPECT_EQ(read_file(csv_path), read_file(replay.out_dir / again.outputs[0].file));
  fs::remove_all(dir);
}

}  // namespace
}  // namespace intruder
