// ============================================================================
// experiments.hpp -- reproduction harness for the simulation study
//
// Each experiment writes plot-ready CSV plus a manifest.json carrying the
// full config snapshot, SHA-256 of every output and the wall-clock time.
// Feeding a manifest back in reproduces byte-identical CSV files.
//
// Column contracts:
//   scatter.csv      trial,label,statistic,z
//   streaming.csv    k,y,statistic,z,decision,conditional_error
//   mc_vs_exact.csv  n_trials,n_class1,n_class2,empirical_error,exact_error,
//                    empirical_miss_given_1,exact_miss_given_1,
//                    empirical_miss_given_2,exact_miss_given_2
//   surface.csv      see write_surface_csv
//   horizon.csv      k_f,exact_error
//   roc.csv          threshold,false_positive_rate,true_positive_rate
// ============================================================================
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "intruder/error_analysis.hpp"
#include "intruder/model.hpp"

namespace intruder {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum class ExperimentKind { Scatter, Streaming, McVsExact, Surface, HorizonSweep, Roc };

[[nodiscard]] std::string_view to_string(ExperimentKind kind) noexcept;
/// Accepts scatter, streaming, mc-vs-exact, surface, horizon-sweep, roc.
[[nodiscard]] ExperimentKind experiment_from_string(std::string_view name);

struct ExperimentConfig {
  ModelConfig model;
  std::optional<std::size_t> n_trials;  ///< unset: per-experiment default
  std::uint64_t seed = 1;
  double accuracy = kDefaultAccuracy;
  std::filesystem::path out_dir = "out";
  ExperimentKind kind = ExperimentKind::Scatter;
  std::size_t block_size = 100;
  std::vector<int> kf_values{1, 2, 5, 10, 15, 20, 30, 40};
  std::vector<double> k_ratios{0.25, 0.5, 1.0, 2.0, 4.0};
  std::vector<double> m_ratios{0.25, 0.5, 1.0, 2.0, 4.0};

  [[nodiscard]] std::size_t trials() const;
  void validate() const;
};

/// Trial count used when the config leaves it unset.
[[nodiscard]] std::size_t default_trials(ExperimentKind kind) noexcept;

// Each run_* writes its CSV to `csv` and returns a JSON summary.
nlohmann::json run_scatter(const ExperimentConfig& config, std::ostream& csv);
nlohmann::json run_streaming(const ExperimentConfig& config, std::ostream& csv);
nlohmann::json run_mc_vs_exact(const ExperimentConfig& config, std::ostream& csv);
nlohmann::json run_surface(const ExperimentConfig& config, std::ostream& csv);
nlohmann::json run_horizon_sweep(const ExperimentConfig& config, std::ostream& csv);
nlohmann::json run_roc(const ExperimentConfig& config, std::ostream& csv);

/// File name of the CSV an experiment produces.
[[nodiscard]] std::string output_file_name(ExperimentKind kind);

struct OutputChecksum {
  std::string file;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  nlohmann::json config;
  std::string tool_version;
  std::uint64_t seed = 0;
  std::vector<OutputChecksum> outputs;
  double wall_clock_seconds = 0.0;
  nlohmann::json summary;
};

[[nodiscard]] nlohmann::json to_json(const RunManifest& manifest);

/// Runs the configured experiment into config.out_dir and writes manifest.json there.
RunManifest run_experiment(const ExperimentConfig& config);

/// Lowercase hex SHA-256 of a file's bytes.
[[nodiscard]] std::string sha256_file(const std::filesystem::path& path);

/// Least-squares slope and R^2 of ln(error) against k_f.
struct LogLinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
[[nodiscard]] LogLinearFit fit_log_linear(std::span<const int> horizons,
                                          std::span<const double> errors);

}  // namespace intruder
