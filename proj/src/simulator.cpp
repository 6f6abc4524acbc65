#include "intruder/simulator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "intruder/errors.hpp"

namespace intruder {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

template <typename T>
T parse_field(std::string_view field, std::size_t line_no, const char* name) {
  T value{};
  const auto* begin = field.data();
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParameterError("trajectory CSV line " + std::to_string(line_no) + ": bad " + name +
                         " field '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

std::size_t TrialBatch::count(ClassLabel label) const noexcept {
  return static_cast<std::size_t>(std::count_if(
      trials.begin(), trials.end(), [label](const Trial& t) { return t.label == label; }));
}

std::vector<MeasurementSeries> TrialBatch::series_of(ClassLabel label) const {
  std::vector<MeasurementSeries> out;
  for (const auto& trial : trials) {
    if (trial.label == label) out.push_back(trial.series);
  }
  return out;
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

double GaussianSource::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double GaussianSource::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

MeasurementSeries simulate_trajectory(const ClassStatistics& stats, int horizon,
                                      GaussianSource& source, double period) {
  validate(stats);
  if (horizon < 1) throw ParameterError("horizon must be at least 1");
  MeasurementSeries series;
  series.period = period;
  series.samples.resize(static_cast<std::size_t>(horizon));
  const double stationary_sd = std::sqrt(stats.alpha);
  const double innovation_sd = std::sqrt(stats.alpha * (1.0 - stats.rho * stats.rho));
  double y = stationary_sd * source.normal();
  series.samples[0] = y;
  for (std::size_t k = 1; k < series.samples.size(); ++k) {
    y = stats.rho * y + innovation_sd * source.normal();
    series.samples[k] = y;
  }
  return series;
}

MeasurementSeries simulate_trajectory(const ClassStatistics& stats, int horizon,
                                      std::uint64_t seed, double period) {
  GaussianSource source(seed);
  return simulate_trajectory(stats, horizon, source, period);
}

TrialBatch simulate_batch(const ModelConfig& config, std::size_t n_trials, std::uint64_t seed) {
  config.validate();
  if (n_trials < 1) throw ParameterError("n_trials must be at least 1");
  const ClassStatistics stats1 = config.statistics(ClassLabel::One);
  const ClassStatistics stats2 = config.statistics(ClassLabel::Two);
  const int horizon = config.sampling.horizon;
  const double period = config.sampling.period;

  TrialBatch batch;
  batch.seed = seed;
  batch.trials.resize(n_trials);
  for (std::size_t i = 0; i < n_trials; ++i) {
    GaussianSource source(derive_stream_seed(seed, i));
    Trial& trial = batch.trials[i];
    trial.index = i;
    trial.label = source.uniform() < config.sampling.prior1 ? ClassLabel::One : ClassLabel::Two;
    trial.series = simulate_trajectory(trial.label == ClassLabel::One ? stats1 : stats2, horizon,
                                       source, period);
  }
  return batch;
}

MeasurementSeries remove_mean(const MeasurementSeries& raw) {
  if (raw.samples.empty()) throw ParameterError("cannot remove the mean of an empty series");
  const double mean = std::accumulate(raw.samples.begin(), raw.samples.end(), 0.0) /
                      static_cast<double>(raw.samples.size());
  MeasurementSeries out = raw;
  for (double& y : out.samples) y -= mean;
  return out;
}

void write_trials_csv(std::ostream& out, const TrialBatch& batch) {
  out << "trial,label,k,y\n";
  char buffer[64];
  for (const auto& trial : batch.trials) {
    for (std::size_t k = 0; k < trial.series.samples.size(); ++k) {
      auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), trial.series.samples[k]);
      out << trial.index << ',' << to_int(trial.label) << ',' << k << ','
          << std::string_view(buffer, static_cast<std::size_t>(end - buffer)) << '\n';
    }
  }
}

TrialBatch read_trials_csv(std::istream& in, double period) {
  std::string line;
  if (!std::getline(in, line)) throw ParameterError("trajectory CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "trial,label,k,y") {
    throw ParameterError("trajectory CSV header must be 'trial,label,k,y', got '" + line + "'");
  }
  TrialBatch batch;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string_view rest(line);
    std::string_view fields[4];
    for (int f = 0; f < 4; ++f) {
      const auto comma = rest.find(',');
      if ((f < 3) == (comma == std::string_view::npos)) {
        throw ParameterError("trajectory CSV line " + std::to_string(line_no) +
                             ": expected 4 fields");
      }
      fields[f] = rest.substr(0, comma);
      rest = (f < 3) ? rest.substr(comma + 1) : std::string_view{};
    }
    const auto trial_id = parse_field<std::size_t>(fields[0], line_no, "trial");
    const ClassLabel label = label_from_int(parse_field<int>(fields[1], line_no, "label"));
    const auto k = parse_field<std::size_t>(fields[2], line_no, "k");
    const auto y = parse_field<double>(fields[3], line_no, "y");
    if (!std::isfinite(y)) {
      throw ParameterError("trajectory CSV line " + std::to_string(line_no) + ": non-finite y");
    }

    if (batch.trials.empty() || batch.trials.back().index != trial_id) {
      if (k != 0) {
        throw ParameterError("trajectory CSV line " + std::to_string(line_no) +
                             ": trial must start at k=0");
      }
      Trial trial;
      trial.index = trial_id;
      trial.label = label;
      trial.series.period = period;
      batch.trials.push_back(std::move(trial));
    }
    Trial& current = batch.trials.back();
    if (current.label != label || k != current.series.samples.size()) {
      throw ParameterError("trajectory CSV line " + std::to_string(line_no) +
                           ": inconsistent label or out-of-order k");
    }
    current.series.samples.push_back(y);
  }
  return batch;
}

}  // namespace intruder
