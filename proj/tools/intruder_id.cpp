// intruder-id: command-line front end for simulation, detection, fitting,
// error analysis and the reproduction experiments.
//
// Exit codes: 0 success, 1 I/O or other failure, 2 configuration error,
// 3 numerical failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "intruder/config.hpp"
#include "intruder/detector.hpp"
#include "intruder/error_analysis.hpp"
#include "intruder/errors.hpp"
#include "intruder/experiments.hpp"
#include "intruder/format.hpp"
#include "intruder/simulator.hpp"

namespace {

using namespace intruder;
using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<double> accuracy;
};

ExperimentConfig load_config(const GlobalOptions& global) {
  ExperimentConfig config;
  if (!global.config_path.empty()) {
    config = experiment_config_from_json(load_json_document(global.config_path));
  }
  if (global.seed) config.seed = *global.seed;
  if (global.out_dir) config.out_dir = *global.out_dir;
  if (global.accuracy) config.accuracy = *global.accuracy;
  config.validate();
  return config;
}

/// "-" or empty means stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw std::runtime_error("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

TrialBatch read_batch(const std::string& path, double period) {
  if (path == "-") return read_trials_csv(std::cin, period);
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open trajectory file " + path);
  return read_trials_csv(in, period);
}

void warn_if_identical(const DetectorSpec& spec) {
  if (spec.identical_classes()) {
    std::cerr << "warning: the two classes have identical statistics; "
                 "decisions depend on the priors only\n";
  }
}

json detection_line(std::size_t trial, const DetectionReport& report) {
  return json{{"trial", trial},
              {"decision", to_int(report.decision)},
              {"statistic", report.statistic},
              {"z", report.threshold},
              {"conditional_error", report.conditional_error}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classify feedback-controlled aerial intruders from velocity-deviation data"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kToolVersion));

  GlobalOptions global;
  app.add_option("--config", global.config_path, "parameter / experiment JSON (or a run manifest)")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", global.seed, "master RNG seed");
  app.add_option("--out-dir", global.out_dir, "directory for experiment outputs");
  app.add_option("--accuracy", global.accuracy, "accuracy target E for error probabilities");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "simulate a labelled trial batch as CSV");
  std::optional<std::size_t> sim_trials;
  std::string sim_output = "-";
  simulate->add_option("--trials,-n", sim_trials, "number of trials (default 500)");
  simulate->add_option("--output,-o", sim_output, "CSV path, '-' for stdout");

  // detect
  auto* detect = app.add_subcommand("detect", "classify every trial of a trajectory CSV");
  std::string detect_input;
  std::string detect_output = "-";
  detect->add_option("--input,-i", detect_input, "trajectory CSV ('-' for stdin)")->required();
  detect->add_option("--output,-o", detect_output, "JSON-lines path, '-' for stdout");

  // detect-stream
  auto* stream = app.add_subcommand("detect-stream", "running decision after every sample");
  std::string stream_input;
  std::string stream_output = "-";
  std::optional<std::size_t> stream_trial;
  stream->add_option("--input,-i", stream_input, "trajectory CSV ('-' for stdin)")->required();
  stream->add_option("--output,-o", stream_output, "JSON-lines path, '-' for stdout");
  stream->add_option("--trial", stream_trial, "only this trial id");

  // fit
  auto* fit = app.add_subcommand("fit", "fit class statistics from labelled archives");
  std::string fit_input;
  std::string fit_output = "-";
  fit->add_option("--input,-i", fit_input, "labelled trajectory CSV")->required();
  fit->add_option("--output,-o", fit_output, "JSON path, '-' for stdout");

  // error-total
  auto* err_total = app.add_subcommand("error-total", "a priori total error probability");
  std::string total_output = "-";
  err_total->add_option("--output,-o", total_output, "JSON path, '-' for stdout");

  // error-surface
  auto* err_surface = app.add_subcommand("error-surface", "total error over a k/m ratio grid");
  std::vector<double> surface_k;
  std::vector<double> surface_m;
  std::string surface_output = "-";
  err_surface->add_option("--k-ratios", surface_k, "k2/k1 grid (columns)");
  err_surface->add_option("--m-ratios", surface_m, "m2/m1 grid (rows)");
  err_surface->add_option("--output,-o", surface_output, "CSV path, '-' for stdout");

  // error-vs-horizon
  auto* err_horizon = app.add_subcommand("error-vs-horizon", "total error as a function of k_f");
  std::vector<int> horizon_values;
  int kf_min = 0;
  int kf_max = 0;
  int kf_step = 1;
  std::string horizon_output = "-";
  err_horizon->add_option("--kf", horizon_values, "explicit list of horizons");
  err_horizon->add_option("--kf-min", kf_min, "range start");
  err_horizon->add_option("--kf-max", kf_max, "range end (inclusive)");
  err_horizon->add_option("--kf-step", kf_step, "range step")->check(CLI::PositiveNumber);
  err_horizon->add_option("--output,-o", horizon_output, "CSV path, '-' for stdout");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "run a reproduction experiment");
  std::string experiment_name;
  std::optional<std::size_t> experiment_trials;
  experiment
      ->add_option("name", experiment_name,
                   "scatter | streaming | mc-vs-exact | surface | horizon-sweep | roc")
      ->required();
  experiment->add_option("--trials,-n", experiment_trials, "override the trial count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    ExperimentConfig config = load_config(global);
    const ModelConfig& model = config.model;

    if (*simulate) {
      const TrialBatch batch = simulate_batch(model, sim_trials.value_or(500), config.seed);
      Output out(sim_output);
      write_trials_csv(out.stream(), batch);
    } else if (*detect) {
      const DetectorSpec spec = build_detector(model);
      warn_if_identical(spec);
      const TrialBatch batch = read_batch(detect_input, model.sampling.period);
      Output out(detect_output);
      for (const auto& trial : batch.trials) {
        out.stream() << detection_line(trial.index, detect_full(spec, trial.series.samples)).dump()
                     << '\n';
      }
    } else if (*stream) {
      const DetectorSpec spec = build_detector(model);
      warn_if_identical(spec);
      const TrialBatch batch = read_batch(stream_input, model.sampling.period);
      Output out(stream_output);
      for (const auto& trial : batch.trials) {
        if (stream_trial && trial.index != *stream_trial) continue;
        SufficientStatistics running;
        for (std::size_t k = 0; k < trial.series.samples.size(); ++k) {
          running.push(trial.series.samples[k]);
          json line = detection_line(trial.index, detect_simplified(spec, running));
          line["k"] = k;
          out.stream() << line.dump() << '\n';
        }
      }
    } else if (*fit) {
      const TrialBatch batch = read_batch(fit_input, model.sampling.period);
      json doc = json::object();
      std::optional<ClassStatistics> fitted[2];
      for (auto label : {ClassLabel::One, ClassLabel::Two}) {
        const auto series = batch.series_of(label);
        if (series.empty()) continue;
        const ClassStatistics stats = fit_class_statistics(series);
        fitted[to_int(label) - 1] = stats;
        json entry = to_json(stats);
        entry["n_series"] = series.size();
        doc["class" + std::to_string(to_int(label))] = entry;
      }
      if (doc.empty()) throw ParameterError("archive contains no trials");
      if (fitted[0] && fitted[1]) {
        doc["detector"] = to_json(
            build_detector(*fitted[0], *fitted[1], model.sampling.prior1, model.sampling.horizon));
      }
      Output out(fit_output);
      out.stream() << doc.dump(2) << '\n';
    } else if (*err_total) {
      const ErrorReport report = total_error(model, config.accuracy);
      Output out(total_output);
      out.stream() << to_json(report).dump(2) << '\n';
    } else if (*err_surface) {
      if (surface_k.empty()) surface_k = config.k_ratios;
      if (surface_m.empty()) surface_m = config.m_ratios;
      const ErrorSurface surface = error_surface(model, surface_k, surface_m, config.accuracy);
      Output out(surface_output);
      write_surface_csv(out.stream(), surface);
    } else if (*err_horizon) {
      if (horizon_values.empty() && kf_min > 0 && kf_max >= kf_min) {
        for (int kf = kf_min; kf <= kf_max; kf += kf_step) horizon_values.push_back(kf);
      }
      if (horizon_values.empty()) horizon_values = config.kf_values;
      Output out(horizon_output);
      out.stream() << "k_f,total_error\n";
      for (int kf : horizon_values) {
        ModelConfig at_horizon = model;
        at_horizon.sampling.horizon = kf;
        out.stream() << kf << ','
                     << format_number(total_error(at_horizon, config.accuracy).total_error) << '\n';
      }
    } else if (*experiment) {
      config.kind = experiment_from_string(experiment_name);
      if (experiment_trials) config.n_trials = *experiment_trials;
      const RunManifest manifest = run_experiment(config);
      std::cout << to_json(manifest).dump(2) << '\n';
    }
  } catch (const ParameterError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return EXIT_FAILURE;
  }
  return EXIT_SUCCESS;
}
