#include "intruder/config.hpp"

#include <fstream>
#include <set>
#include <string>

#include "intruder/errors.hpp"

namespace intruder {

namespace {

using nlohmann::json;

const std::set<std::string>& model_keys() {
  static const std::set<std::string> keys{"m1", "k1", "m2", "k2", "q", "T", "kf", "prior1"};
  return keys;
}

const std::set<std::string>& experiment_keys() {
  static const std::set<std::string> keys{"n_trials", "seed",     "accuracy", "block_size",
                                          "kf_values", "k_ratios", "m_ratios", "experiment"};
  return keys;
}

void reject_unknown_keys(const json& doc, bool allow_experiment_keys) {
  if (!doc.is_object()) throw ParameterError("configuration must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (model_keys().count(key) != 0) continue;
    if (allow_experiment_keys && experiment_keys().count(key) != 0) continue;
    throw ParameterError("unknown configuration key '" + key + "'");
  }
}

template <typename T>
void read_if_present(const json& doc, const char* key, T& target) {
  if (!doc.contains(key)) return;
  try {
    target = doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParameterError(std::string("configuration key '") + key + "': " + e.what());
  }
}

void read_integer(const json& doc, const char* key, int& target) {
  if (!doc.contains(key)) return;
  if (!doc.at(key).is_number_integer()) {
    throw ParameterError(std::string("configuration key '") + key + "' must be an integer");
  }
  read_if_present(doc, key, target);
}

ModelConfig model_from(const json& doc) {
  ModelConfig config;
  read_if_present(doc, "m1", config.class1.mass);
  read_if_present(doc, "k1", config.class1.gain);
  read_if_present(doc, "m2", config.class2.mass);
  read_if_present(doc, "k2", config.class2.gain);
  read_if_present(doc, "q", config.noise.intensity);
  read_if_present(doc, "T", config.sampling.period);
  read_integer(doc, "kf", config.sampling.horizon);
  read_if_present(doc, "prior1", config.sampling.prior1);
  config.validate();
  return config;
}

bool is_non_negative_integer(const json& value) {
  return value.is_number_unsigned() || (value.is_number_integer() && value.get<long long>() >= 0);
}

}  // namespace

ModelConfig model_config_from_json(const json& doc) {
  reject_unknown_keys(doc, false);
  return model_from(doc);
}

json to_json(const ModelConfig& config) {
  return json{{"m1", config.class1.mass},       {"k1", config.class1.gain},
              {"m2", config.class2.mass},       {"k2", config.class2.gain},
              {"q", config.noise.intensity},    {"T", config.sampling.period},
              {"kf", config.sampling.horizon},  {"prior1", config.sampling.prior1}};
}

ExperimentConfig experiment_config_from_json(const json& doc) {
  reject_unknown_keys(doc, true);
  ExperimentConfig config;
  config.model = model_from(doc);
  if (doc.contains("n_trials")) {
    std::size_t n = 0;
    if (!is_non_negative_integer(doc.at("n_trials")) || doc.at("n_trials") == 0) {
      throw ParameterError("configuration key 'n_trials' must be a positive integer");
    }
    read_if_present(doc, "n_trials", n);
    config.n_trials = n;
  }
  if (doc.contains("seed") && !is_non_negative_integer(doc.at("seed"))) {
    throw ParameterError("configuration key 'seed' must be a non-negative integer");
  }
  read_if_present(doc, "seed", config.seed);
  read_if_present(doc, "accuracy", config.accuracy);
  read_if_present(doc, "block_size", config.block_size);
  read_if_present(doc, "kf_values", config.kf_values);
  read_if_present(doc, "k_ratios", config.k_ratios);
  read_if_present(doc, "m_ratios", config.m_ratios);
  if (doc.contains("experiment")) {
    std::string name;
    read_if_present(doc, "experiment", name);
    config.kind = experiment_from_string(name);
  }
  config.validate();
  return config;
}

json to_json(const ExperimentConfig& config) {
  json doc = to_json(config.model);
  doc["n_trials"] = config.trials();
  doc["seed"] = config.seed;
  doc["accuracy"] = config.accuracy;
  doc["block_size"] = config.block_size;
  doc["kf_values"] = config.kf_values;
  doc["k_ratios"] = config.k_ratios;
  doc["m_ratios"] = config.m_ratios;
  doc["experiment"] = std::string(to_string(config.kind));
  return doc;
}

json load_json_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open configuration file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParameterError("malformed JSON in " + path.string() + ": " + e.what());
  }
  if (doc.is_object() && doc.contains("config") && doc.contains("outputs")) {
    return doc.at("config");
  }
  return doc;
}

json to_json(const ClassStatistics& stats) {
  return json{{"alpha", stats.alpha}, {"rho", stats.rho}};
}

json to_json(const AccuracyBudget& budget) {
  return json{{"target", budget.target},
              {"t", budget.t},
              {"theta", budget.theta},
              {"delta", budget.delta},
              {"n_terms", budget.n_terms},
              {"n_terms_main", budget.n_terms_main},
              {"n_terms_appendix", budget.n_terms_appendix},
              {"capped", budget.capped},
              {"lambda_min", budget.lambda_min},
              {"lambda_max", budget.lambda_max},
              {"effective_dim", budget.effective_dim},
              {"drop_threshold", budget.drop_threshold},
              {"resolution_bound", budget.resolution_bound},
              {"truncation_bound", budget.truncation_bound},
              {"achieved_bound", budget.achieved_bound()}};
}

json to_json(const ErrorReport& report) {
  json doc{{"total_error", report.total_error},
           {"miss_given_1", report.miss_given_1},
           {"miss_given_2", report.miss_given_2},
           {"prior1", report.prior1},
           {"prior2", report.prior2},
           {"threshold", report.threshold},
           {"horizon", report.horizon},
           {"degenerate", report.degenerate},
           {"unclamped_cdf1", report.unclamped_cdf1},
           {"unclamped_cdf2", report.unclamped_cdf2},
           {"eigen_drop_ratio", kEigenDropRatio}};
  if (!report.degenerate) {
    doc["budget1"] = to_json(report.budget1);
    doc["budget2"] = to_json(report.budget2);
  }
  return doc;
}

json to_json(const DetectorSpec& spec) {
  return json{{"stats1", to_json(spec.stats1)},
              {"stats2", to_json(spec.stats2)},
              {"a", spec.a},
              {"b", spec.b},
              {"c", spec.c},
              {"log_prior_ratio", spec.log_prior_ratio},
              {"horizon", spec.horizon},
              {"identical_classes", spec.identical_classes()}};
}

}  // namespace intruder
