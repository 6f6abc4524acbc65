// JSON parameter documents.
//
// Model keys: m1, k1, m2, k2, q, T, kf, prior1 (all optional; missing keys
// take the reference-study defaults). Experiment documents may add n_trials,
// seed, accuracy, block_size, kf_values, k_ratios, m_ratios and experiment.
// Unknown keys are rejected.
#pragma once

#include <filesystem>

#include <json.hpp>

#include "intruder/detector.hpp"
#include "intruder/error_analysis.hpp"
#include "intruder/experiments.hpp"
#include "intruder/model.hpp"

namespace intruder {

[[nodiscard]] ModelConfig model_config_from_json(const nlohmann::json& doc);
[[nodiscard]] nlohmann::json to_json(const ModelConfig& config);

[[nodiscard]] ExperimentConfig experiment_config_from_json(const nlohmann::json& doc);
[[nodiscard]] nlohmann::json to_json(const ExperimentConfig& config);

/// Parses a file; a run manifest is accepted too and its config snapshot used.
[[nodiscard]] nlohmann::json load_json_document(const std::filesystem::path& path);

[[nodiscard]] nlohmann::json to_json(const ClassStatistics& stats);
[[nodiscard]] nlohmann::json to_json(const AccuracyBudget& budget);
[[nodiscard]] nlohmann::json to_json(const ErrorReport& report);
[[nodiscard]] nlohmann::json to_json(const DetectorSpec& spec);

}  // namespace intruder
