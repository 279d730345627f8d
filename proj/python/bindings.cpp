#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "poshs/belief.hpp"
#include "poshs/harness.hpp"
#include "poshs/identity.hpp"
#include "poshs/occupant.hpp"
#include "poshs/records.hpp"
#include "poshs/stats.hpp"

namespace py = pybind11;
using namespace poshs;

namespace {

// Configs and reports cross the boundary as JSON text; the Python wrapper
// turns them into dicts.
std::string run_json(const std::string& config_json, bool unassisted) {
  const ExperimentConfig config = experiment_config_from_json(json::parse(config_json));
  config.validate();
  RunOptions options;
  options.unassisted = unassisted;
  return to_json(run_experiment(config, options)).dump();
}

std::string config_json(const std::string& overrides) {
  const ExperimentConfig config =
      overrides.empty() ? ExperimentConfig{} : experiment_config_from_json(json::parse(overrides));
  config.validate();
  return to_json(config).dump();
}

py::list score_list(const std::vector<std::vector<int>>& confusion, const std::vector<std::string>& labels) {
  py::list out;
  for (const ModelScore& s : score(confusion, labels)) {
    py::dict d;
    d["id"] = s.id;
    d["accuracy"] = s.accuracy;
    d["f1"] = s.f1;
    out.append(d);
  }
  return out;
}

py::dict t_test(const std::vector<double>& a, const std::vector<double>& b) {
  const TTestResult r = paired_t_test(a, b);
  py::dict d;
  d["t"] = r.t;
  d["df"] = r.df;
  d["p_less"] = r.p_one_sided;
  d["p_two_sided"] = r.p_two_sided;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Occupant identification and thermal control core";

  m.def(
      "pmv",
      [](double temp, double humidity, double met, double clo, double air_speed) {
        ComfortParams p;
        p.clo = clo;
        p.air_speed = air_speed;
        return pmv(temp, humidity, met, p);
      },
      py::arg("temp"), py::arg("humidity"), py::arg("met"), py::arg("clo") = 0.5, py::arg("air_speed") = 0.1);

  m.def(
      "gaussian_pdf", [](double mu, double sigma, double x) { return gaussian_pdf({mu, sigma}, x); },
      py::arg("mu"), py::arg("sigma"), py::arg("x"));

  m.def(
      "belief_update",
      [](const std::vector<double>& belief, const std::vector<double>& likelihoods) {
        return update(BeliefVector(belief), likelihoods).values();
      },
      py::arg("belief"), py::arg("likelihoods"));

  m.def(
      "posterior_closed_form",
      [](const std::vector<double>& mus, double sigma, double th, const std::vector<double>& priors) {
        return posterior_closed_form(mus, sigma, th, BeliefVector(priors)).values();
      },
      py::arg("mus"), py::arg("sigma"), py::arg("th"), py::arg("priors"));

  m.def(
      "jensen_shannon",
      [](const std::vector<double>& p, const std::vector<double>& q) { return jensen_shannon(p, q); },
      py::arg("p"), py::arg("q"));

  m.def("score", &score_list, py::arg("confusion"), py::arg("labels") = std::vector<std::string>{});
  m.def("paired_t_test", &t_test, py::arg("a"), py::arg("b"));

  m.def("_config_json", &config_json, py::arg("overrides") = std::string{});
  m.def("_run_json", &run_json, py::arg("config_json"), py::arg("unassisted") = false,
        py::call_guard<py::gil_scoped_release>());

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<BeliefError>(m, "BeliefError", PyExc_ValueError);
}
