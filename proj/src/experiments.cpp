#include "intruder/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <openssl/evp.h>

#include "intruder/config.hpp"
#include "intruder/detector.hpp"
#include "intruder/errors.hpp"
#include "intruder/format.hpp"
#include "intruder/simulator.hpp"

namespace intruder {

namespace {

using nlohmann::json;

struct Confusion {
  std::size_t counts[2][2] = {{0, 0}, {0, 0}};  // [truth-1][decision-1]

  void add(ClassLabel truth, ClassLabel decision) {
    ++counts[to_int(truth) - 1][to_int(decision) - 1];
  }
  [[nodiscard]] std::size_t total(ClassLabel truth) const {
    const auto& row = counts[to_int(truth) - 1];
    return row[0] + row[1];
  }
  [[nodiscard]] std::size_t wrong(ClassLabel truth) const {
    return counts[to_int(truth) - 1][to_int(other(truth)) - 1];
  }
  [[nodiscard]] double miss_rate(ClassLabel truth) const {
    const auto n = total(truth);
    return n == 0 ? 0.0 : static_cast<double>(wrong(truth)) / static_cast<double>(n);
  }
  [[nodiscard]] double error_rate() const {
    const auto n = total(ClassLabel::One) + total(ClassLabel::Two);
    return n == 0 ? 0.0
                  : static_cast<double>(wrong(ClassLabel::One) + wrong(ClassLabel::Two)) /
                        static_cast<double>(n);
  }
  [[nodiscard]] json to_json() const {
    return json{{"true1_decided1", counts[0][0]},
                {"true1_decided2", counts[0][1]},
                {"true2_decided1", counts[1][0]},
                {"true2_decided2", counts[1][1]}};
  }
};

double binomial_se(double p, std::size_t n) {
  return n == 0 ? 0.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace

std::string_view to_string(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::Scatter: return "scatter";
    case ExperimentKind::Streaming: return "streaming";
    case ExperimentKind::McVsExact: return "mc-vs-exact";
    case ExperimentKind::Surface: return "surface";
    case ExperimentKind::HorizonSweep: return "horizon-sweep";
    case ExperimentKind::Roc: return "roc";
  }
  return "unknown";
}

ExperimentKind experiment_from_string(std::string_view name) {
  for (auto kind : {ExperimentKind::Scatter, ExperimentKind::Streaming, ExperimentKind::McVsExact,
                    ExperimentKind::Surface, ExperimentKind::HorizonSweep, ExperimentKind::Roc}) {
    if (to_string(kind) == name) return kind;
  }
  throw ParameterError("unknown experiment '" + std::string(name) + "'");
}

std::size_t default_trials(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::Scatter: return 500;
    case ExperimentKind::McVsExact: return 5000;
    case ExperimentKind::Roc: return 5000;
    default: return 1;
  }
}

std::size_t ExperimentConfig::trials() const { return n_trials.value_or(default_trials(kind)); }

void ExperimentConfig::validate() const {
  model.validate();
  if (trials() < 1) throw ParameterError("n_trials must be at least 1");
  if (!(accuracy > 0.0 && accuracy < 1.0)) {
    throw ParameterError("accuracy target must lie strictly between 0 and 1");
  }
  if (block_size < 1) throw ParameterError("block_size must be at least 1");
  for (int kf : kf_values) {
    if (kf < 1) throw ParameterError("every k_f in kf_values must be at least 1");
  }
  for (double r : k_ratios) {
    if (!(r > 0.0)) throw ParameterError("k_ratios must be positive");
  }
  for (double r : m_ratios) {
    if (!(r > 0.0)) throw ParameterError("m_ratios must be positive");
  }
}

std::string output_file_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Scatter: return "scatter.csv";
    case ExperimentKind::Streaming: return "streaming.csv";
    case ExperimentKind::McVsExact: return "mc_vs_exact.csv";
    case ExperimentKind::Surface: return "surface.csv";
    case ExperimentKind::HorizonSweep: return "horizon.csv";
    case ExperimentKind::Roc: return "roc.csv";
  }
  return "output.csv";
}

json run_scatter(const ExperimentConfig& config, std::ostream& csv) {
  config.validate();
  const DetectorSpec spec = build_detector(config.model);
  const TrialBatch batch = simulate_batch(config.model, config.trials(), config.seed);
  Confusion confusion;
  csv << "trial,label,statistic,z\n";
  for (const auto& trial : batch.trials) {
    const auto report =
        detect_simplified(spec, SufficientStatistics::from_series(trial.series.samples));
    confusion.add(trial.label, report.decision);
    csv << trial.index << ',' << to_int(trial.label) << ',' << format_number(report.statistic)
        << ',' << format_number(report.threshold) << '\n';
  }
  return json{{"n_trials", batch.trials.size()},
              {"z", threshold(spec, config.model.sampling.horizon)},
              {"confusion", confusion.to_json()},
              {"empirical_error", confusion.error_rate()}};
}

json run_streaming(const ExperimentConfig& config, std::ostream& csv) {
  config.validate();
  const DetectorSpec spec = build_detector(config.model);
  const TrialBatch batch = simulate_batch(config.model, 1, config.seed);
  const Trial& trial = batch.trials.front();

  csv << "k,y,statistic,z,decision,conditional_error\n";
  SufficientStatistics running;
  std::size_t stable_from = 0;
  ClassLabel previous = ClassLabel::One;
  for (std::size_t k = 0; k < trial.series.samples.size(); ++k) {
    running.push(trial.series.samples[k]);
    const auto report = detect_simplified(spec, running);
    if (k == 0 || report.decision != previous) stable_from = k + 1;
    previous = report.decision;
    csv << k << ',' << format_number(trial.series.samples[k]) << ','
        << format_number(report.statistic) << ',' << format_number(report.threshold) << ','
        << to_int(report.decision) << ',' << format_number(report.conditional_error) << '\n';
  }
  return json{{"true_label", to_int(trial.label)},
              {"final_decision", to_int(previous)},
              {"correct", previous == trial.label},
              {"stable_from_samples", stable_from}};
}

json run_mc_vs_exact(const ExperimentConfig& config, std::ostream& csv) {
  config.validate();
  const ErrorReport exact = total_error(config.model, config.accuracy);
  const DetectorSpec spec = build_detector(config.model);
  const TrialBatch batch = simulate_batch(config.model, config.trials(), config.seed);

  csv << "n_trials,n_class1,n_class2,empirical_error,exact_error,empirical_miss_given_1,"
         "exact_miss_given_1,empirical_miss_given_2,exact_miss_given_2\n";
  Confusion confusion;
  const std::size_t n = batch.trials.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& trial = batch.trials[i];
    confusion.add(trial.label,
                  detect_simplified(spec, SufficientStatistics::from_series(trial.series.samples))
                      .decision);
    if ((i + 1) % config.block_size == 0 || i + 1 == n) {
      csv << (i + 1) << ',' << confusion.total(ClassLabel::One) << ','
          << confusion.total(ClassLabel::Two) << ',' << format_number(confusion.error_rate())
          << ',' << format_number(exact.total_error) << ','
          << format_number(confusion.miss_rate(ClassLabel::One)) << ','
          << format_number(exact.miss_given_1) << ','
          << format_number(confusion.miss_rate(ClassLabel::Two)) << ','
          << format_number(exact.miss_given_2) << '\n';
    }
  }
  const double empirical = confusion.error_rate();
  const double se = binomial_se(empirical, n);
  return json{{"n_trials", n},
              {"empirical_error", empirical},
              {"exact_error", exact.total_error},
              {"standard_error", se},
              {"within_3_se", std::abs(empirical - exact.total_error) <= 3.0 * se},
              {"empirical_miss_given_1", confusion.miss_rate(ClassLabel::One)},
              {"exact_miss_given_1", exact.miss_given_1},
              {"empirical_miss_given_2", confusion.miss_rate(ClassLabel::Two)},
              {"exact_miss_given_2", exact.miss_given_2},
              {"confusion", confusion.to_json()}};
}

json run_surface(const ExperimentConfig& config, std::ostream& csv) {
  config.validate();
  const ErrorSurface surface =
      error_surface(config.model, config.k_ratios, config.m_ratios, config.accuracy);
  write_surface_csv(csv, surface);
  const auto [lo, hi] = std::minmax_element(surface.errors.begin(), surface.errors.end());
  return json{{"rows", surface.m_ratios.size()},
              {"cols", surface.k_ratios.size()},
              {"min_error", surface.errors.empty() ? 0.0 : *lo},
              {"max_error", surface.errors.empty() ? 0.0 : *hi}};
}

json run_horizon_sweep(const ExperimentConfig& config, std::ostream& csv) {
  config.validate();
  csv << "k_f,exact_error\n";
  std::vector<double> errors;
  for (int kf : config.kf_values) {
    ModelConfig model = config.model;
    model.sampling.horizon = kf;
    errors.push_back(total_error(model, config.accuracy).total_error);
    csv << kf << ',' << format_number(errors.back()) << '\n';
  }
  const LogLinearFit fit = fit_log_linear(config.kf_values, errors);
  return json{{"log_error_slope_per_sample", fit.slope},
              {"log_error_intercept", fit.intercept},
              {"r_squared", fit.r_squared}};
}

json run_roc(const ExperimentConfig& config, std::ostream& csv) {
  config.validate();
  const DetectorSpec spec = build_detector(config.model);
  const TrialBatch batch = simulate_batch(config.model, config.trials(), config.seed);
  const double z = threshold(spec, config.model.sampling.horizon);

  double lo = z;
  double hi = z;
  for (const auto& trial : batch.trials) {
    const double s =
        detect_simplified(spec, SufficientStatistics::from_series(trial.series.samples)).statistic;
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  constexpr int kPoints = 101;
  std::vector<double> thresholds;
  for (int i = 0; i < kPoints; ++i) thresholds.push_back(lo + (hi - lo) * i / (kPoints - 1));
  thresholds.push_back(z);
  std::sort(thresholds.begin(), thresholds.end());

  const auto curve = roc_sweep(spec, batch, thresholds);
  csv << "threshold,false_positive_rate,true_positive_rate\n";
  for (const auto& point : curve) {
    csv << format_number(point.threshold) << ',' << format_number(point.false_positive_rate) << ','
        << format_number(point.true_positive_rate) << '\n';
  }
  const double map_point[] = {z};
  const RocPoint map = roc_sweep(spec, batch, map_point).front();
  const ErrorReport exact = total_error(config.model, config.accuracy);
  return json{{"z", z},
              {"map_false_positive_rate", map.false_positive_rate},
              {"map_true_positive_rate", map.true_positive_rate},
              {"exact_false_positive_rate", exact.miss_given_2},
              {"exact_true_positive_rate", 1.0 - exact.miss_given_1}};
}

LogLinearFit fit_log_linear(std::span<const int> horizons, std::span<const double> errors) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < std::min(horizons.size(), errors.size()); ++i) {
    if (errors[i] > 0.0) {
      xs.push_back(horizons[i]);
      ys.push_back(std::log(errors[i]));
    }
  }
  LogLinearFit fit;
  if (xs.size() < 2) return fit;
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 initialisation failed");
  }
  char buffer[1 << 15];
  while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
    EVP_DigestUpdate(ctx.get(), buffer, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &length);
  std::ostringstream hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

json to_json(const RunManifest& manifest) {
  json outputs = json::array();
  for (const auto& out : manifest.outputs) {
    outputs.push_back({{"file", out.file}, {"sha256", out.sha256}, {"bytes", out.bytes}});
  }
  return json{{"tool", "intruder-id"},
              {"tool_version", manifest.tool_version},
              {"seed", manifest.seed},
              {"config", manifest.config},
              {"outputs", outputs},
              {"wall_clock_seconds", manifest.wall_clock_seconds},
              {"summary", manifest.summary}};
}

RunManifest run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();
  std::filesystem::create_directories(config.out_dir);
  const auto csv_path = config.out_dir / output_file_name(config.kind);

  json summary;
  {
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + csv_path.string());
    switch (config.kind) {
      case ExperimentKind::Scatter: summary = run_scatter(config, csv); break;
      case ExperimentKind::Streaming: summary = run_streaming(config, csv); break;
      case ExperimentKind::McVsExact: summary = run_mc_vs_exact(config, csv); break;
      case ExperimentKind::Surface: summary = run_surface(config, csv); break;
      case ExperimentKind::HorizonSweep: summary = run_horizon_sweep(config, csv); break;
      case ExperimentKind::Roc: summary = run_roc(config, csv); break;
    }
    if (!csv.flush()) throw std::runtime_error("failed writing " + csv_path.string());
  }

  RunManifest manifest;
  manifest.config = to_json(config);
  manifest.tool_version = std::string(kToolVersion);
  manifest.seed = config.seed;
  manifest.summary = std::move(summary);
  manifest.outputs.push_back({csv_path.filename().string(), sha256_file(csv_path),
                              std::filesystem::file_size(csv_path)});
  manifest.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  std::ofstream out(config.out_dir / "manifest.json");
  out << to_json(manifest).dump(2) << '\n';
  if (!out) throw std::runtime_error("cannot write manifest.json");
  return manifest;
}

}  // namespace intruder
