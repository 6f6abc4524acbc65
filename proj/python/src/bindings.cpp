#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "intruder/config.hpp"
#include "intruder/detector.hpp"
#include "intruder/error_analysis.hpp"
#include "intruder/errors.hpp"
#include "intruder/kms.hpp"
#include "intruder/model.hpp"
#include "intruder/simulator.hpp"

namespace py = pybind11;
namespace ii = intruder;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::span<const double> as_span(const DoubleArray& values) {
  if (values.ndim() != 1) throw py::value_error("expected a one-dimensional array");
  return {values.data(), static_cast<std::size_t>(values.size())};
}

py::array_t<double> to_array(const std::vector<double>& values) {
  return py::array_t<double>(static_cast<py::ssize_t>(values.size()), values.data());
}

ii::ModelConfig make_config(double m1, double k1, double m2, double k2, double q, double T, int kf,
                            double prior1) {
  ii::ModelConfig config;
  config.class1 = {m1, k1, ii::ClassLabel::One};
  config.class2 = {m2, k2, ii::ClassLabel::Two};
  config.noise = {q};
  config.sampling = {T, kf, prior1};
  config.validate();
  return config;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "MAP identification of feedback-controlled aerial intruders";

  py::register_exception<ii::ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<ii::NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::enum_<ii::ClassLabel>(m, "ClassLabel")
      .value("One", ii::ClassLabel::One)
      .value("Two", ii::ClassLabel::Two);

  py::class_<ii::ClassStatistics>(m, "ClassStatistics")
      .def(py::init(&ii::make_class_statistics), py::arg("alpha"), py::arg("rho"))
      .def_readonly("alpha", &ii::ClassStatistics::alpha)
      .def_readonly("rho", &ii::ClassStatistics::rho)
      .def("__repr__", [](const ii::ClassStatistics& s) {
        return "ClassStatistics(alpha=" + std::to_string(s.alpha) +
               ", rho=" + std::to_string(s.rho) + ")";
      });

  py::class_<ii::ModelConfig>(m, "ModelConfig")
      .def(py::init(&make_config), py::arg("m1") = 1.0, py::arg("k1") = 1.0, py::arg("m2") = 1.0,
           py::arg("k2") = 3.0, py::arg("q") = 1.0, py::arg("T") = 0.5, py::arg("kf") = 20,
           py::arg("prior1") = 0.5)
      .def_property_readonly("kf", [](const ii::ModelConfig& c) { return c.sampling.horizon; })
      .def_property_readonly("prior1", [](const ii::ModelConfig& c) { return c.sampling.prior1; })
      .def("statistics", &ii::ModelConfig::statistics, py::arg("label"))
      .def("with_swapped_classes", &ii::ModelConfig::with_swapped_classes)
      .def("to_dict", [](const ii::ModelConfig& c) {
        return py::module_::import("json").attr("loads")(ii::to_json(c).dump());
      });

  m.def(
      "class_statistics",
      [](double mass, double gain, double q, double T) {
        return ii::class_statistics({mass, gain, ii::ClassLabel::One}, {q}, {T, 1, 0.5});
      },
      py::arg("mass"), py::arg("gain"), py::arg("q"), py::arg("T"));

  m.def(
      "kms_inverse_apply",
      [](const ii::ClassStatistics& s, const DoubleArray& v) {
        return to_array(ii::kms_inverse_apply(ii::KmsMatrix(s, v.size()), as_span(v)));
      },
      py::arg("stats"), py::arg("v"));
  m.def(
      "kms_logdet",
      [](const ii::ClassStatistics& s, std::size_t dim) { return ii::kms_logdet({s, dim}); },
      py::arg("stats"), py::arg("dim"));
  m.def(
      "kms_quadratic_form",
      [](const ii::ClassStatistics& s, const DoubleArray& v) {
        return ii::kms_quadratic_form(ii::KmsMatrix(s, v.size()), as_span(v));
      },
      py::arg("stats"), py::arg("v"));

  py::class_<ii::DetectorSpec>(m, "DetectorSpec")
      .def_readonly("a", &ii::DetectorSpec::a)
      .def_readonly("b", &ii::DetectorSpec::b)
      .def_readonly("c", &ii::DetectorSpec::c)
      .def_readonly("log_prior_ratio", &ii::DetectorSpec::log_prior_ratio)
      .def_readonly("horizon", &ii::DetectorSpec::horizon)
      .def_readonly("stats1", &ii::DetectorSpec::stats1)
      .def_readonly("stats2", &ii::DetectorSpec::stats2)
      .def_property_readonly("identical_classes", &ii::DetectorSpec::identical_classes)
      .def("threshold", [](const ii::DetectorSpec& s, int h) { return ii::threshold(s, h); },
           py::arg("horizon"));

  py::class_<ii::DetectionReport>(m, "DetectionReport")
      .def_property_readonly("decision",
                             [](const ii::DetectionReport& r) { return ii::to_int(r.decision); })
      .def_readonly("statistic", &ii::DetectionReport::statistic)
      .def_readonly("threshold", &ii::DetectionReport::threshold)
      .def_readonly("margin", &ii::DetectionReport::margin)
      .def_readonly("conditional_error", &ii::DetectionReport::conditional_error)
      .def_readonly("samples_used", &ii::DetectionReport::samples_used);

  m.def("build_detector", py::overload_cast<const ii::ModelConfig&>(&ii::build_detector),
        py::arg("config"));
  m.def("build_detector",
        py::overload_cast<const ii::ClassStatistics&, const ii::ClassStatistics&, double, int>(
            &ii::build_detector),
        py::arg("stats1"), py::arg("stats2"), py::arg("prior1"), py::arg("horizon"));
  m.def(
      "detect",
      [](const ii::DetectorSpec& spec, const DoubleArray& y) {
        return ii::detect_full(spec, as_span(y));
      },
      py::arg("spec"), py::arg("y"));
  m.def(
      "detect_simplified",
      [](const ii::DetectorSpec& spec, const DoubleArray& y) {
        return ii::detect_simplified(spec, ii::SufficientStatistics::from_series(as_span(y)));
      },
      py::arg("spec"), py::arg("y"));
  m.def(
      "detect_stream",
      [](const ii::DetectorSpec& spec, const DoubleArray& y) {
        std::vector<int> decisions;
        ii::SufficientStatistics running;
        for (double value : as_span(y)) {
          running.push(value);
          decisions.push_back(ii::to_int(ii::detect_simplified(spec, running).decision));
        }
        return decisions;
      },
      py::arg("spec"), py::arg("y"), "running decision after each sample");
  m.def("conditional_error", py::overload_cast<double, double>(&ii::conditional_error),
        py::arg("statistic"), py::arg("threshold"));

  m.def(
      "simulate_trajectory",
      [](const ii::ClassStatistics& s, int horizon, std::uint64_t seed) {
        return to_array(ii::simulate_trajectory(s, horizon, seed).samples);
      },
      py::arg("stats"), py::arg("horizon"), py::arg("seed"));
  m.def(
      "simulate_batch",
      [](const ii::ModelConfig& config, std::size_t n_trials, std::uint64_t seed) {
        const auto batch = ii::simulate_batch(config, n_trials, seed);
        const auto horizon = static_cast<py::ssize_t>(config.sampling.horizon);
        py::array_t<int> labels(std::vector<py::ssize_t>{static_cast<py::ssize_t>(n_trials)});
        py::array_t<double> samples({static_cast<py::ssize_t>(n_trials), horizon});
        auto l = labels.mutable_unchecked<1>();
        auto y = samples.mutable_unchecked<2>();
        for (std::size_t i = 0; i < batch.trials.size(); ++i) {
          l(static_cast<py::ssize_t>(i)) = ii::to_int(batch.trials[i].label);
          for (py::ssize_t k = 0; k < horizon; ++k) {
            y(static_cast<py::ssize_t>(i), k) = batch.trials[i].series.samples[k];
          }
        }
        return py::make_tuple(labels, samples);
      },
      py::arg("config"), py::arg("n_trials"), py::arg("seed"),
      "returns (labels, samples[n_trials, kf])");
  m.def(
      "fit_class_statistics",
      [](const std::vector<std::vector<double>>& series_set) {
        std::vector<ii::MeasurementSeries> series;
        for (const auto& s : series_set) series.push_back({s, 1.0});
        return ii::fit_class_statistics(series);
      },
      py::arg("series"));

  m.def(
      "q_sigma_eigenvalues",
      [](const ii::ClassStatistics& s1, const ii::ClassStatistics& s2, int horizon, int hypothesis) {
        return ii::q_sigma_eigenvalues(s1, s2, horizon, ii::label_from_int(hypothesis)).eigenvalues;
      },
      py::arg("stats1"), py::arg("stats2"), py::arg("horizon"), py::arg("hypothesis"));
  m.def(
      "cdf_quadratic_form",
      [](const std::vector<double>& eigenvalues, double z, double target) {
        ii::QuadFormSpectrum spectrum{eigenvalues, static_cast<int>(eigenvalues.size())};
        if (ii::effective_eigenvalues(spectrum).empty()) {
          return ii::cdf_quadratic_form(spectrum, z, 1.0, 0).probability;
        }
        return ii::cdf_quadratic_form(spectrum, z, ii::accuracy_budget(spectrum, z, target))
            .probability;
      },
      py::arg("eigenvalues"), py::arg("z"), py::arg("target") = ii::kDefaultAccuracy);
  m.def(
      "total_error",
      [](const ii::ModelConfig& config, double target) {
        return py::module_::import("json").attr("loads")(
            ii::to_json(ii::total_error(config, target)).dump());
      },
      py::arg("config"), py::arg("target") = ii::kDefaultAccuracy,
      "ErrorReport as a dict");
}
