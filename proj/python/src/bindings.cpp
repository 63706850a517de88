#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lumsim/config.hpp"
#include "lumsim/errors.hpp"
#include "lumsim/metrics.hpp"

namespace py = pybind11;
using namespace lumsim;

namespace {

py::dict stats_to_dict(const EnsembleStats& s) {
  py::dict d;
  d["runs"] = s.runs;
  d["mean_adoption"] = s.mean_adoption;
  d["std_adoption"] = s.std_adoption;
  py::dict shares;
  for (std::size_t k = 0; k < kStrategyCount; ++k) {
    std::vector<double> series;
    for (const auto& m : s.mean_strategy_share) series.push_back(m[k]);
    shares[py::str(std::string(to_string(static_cast<Strategy>(k))))] = series;
  }
  d["mean_strategy_share"] = shares;
  d["final_adoption"] = s.final_adoption;
  return d;
}

}  // namespace

PYBIND11_MODULE(_lumsim, m) {
  m.doc() = "Agent-based simulation of household lighting adoption under policy scenarios";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SimulationFault>(m, "SimulationFault", PyExc_RuntimeError);

  py::class_<RunFactors>(m, "RunFactors")
      .def(py::init<double, double, double>(), py::arg("led_price") = 1.0,
           py::arg("incandescent_price") = 1.0, py::arg("led_innovation") = 1.0)
      .def_readwrite("led_price", &RunFactors::led_price)
      .def_readwrite("incandescent_price", &RunFactors::incandescent_price)
      .def_readwrite("led_innovation", &RunFactors::led_innovation)
      .def("__repr__", [](const RunFactors& f) {
        return "RunFactors(" + std::to_string(f.led_price) + ", " +
               std::to_string(f.incandescent_price) + ", " + std::to_string(f.led_innovation) + ")";
      });

  py::class_<SimulationConfig>(m, "Config")
      .def(py::init<>())
      .def_readwrite("agents", &SimulationConfig::n_agents)
      .def_readwrite("months", &SimulationConfig::months)
      .def_readwrite("runs", &SimulationConfig::runs)
      .def_readwrite("seed", &SimulationConfig::master_seed)
      .def_readwrite("jobs", &SimulationConfig::jobs)
      .def_readwrite("social_sample_size", &SimulationConfig::social_sample_size)
      .def_readwrite("factors_override", &SimulationConfig::factors_override)
      .def_static("from_json", [](const std::string& text) { return parse_config_json(text).simulation; },
                  "Engine constants from a JSON config document.")
      .def_static("from_file", [](const std::string& path) { return load_config_file(path).simulation; })
      .def("to_json", [](const SimulationConfig& c) { return config_to_json(c).dump(2); })
      .def("validate", &SimulationConfig::validate);

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("run_index", &RunResult::run_index)
      .def_readonly("run_seed", &RunResult::run_seed)
      .def_readonly("factors", &RunResult::factors)
      .def_readonly("adoption", &RunResult::adoption)
      .def_readonly("strategy_counts", &RunResult::strategy_counts);

  m.def("scenario_ids", [] {
    return std::vector<std::string>(kBuiltinScenarioIds.begin(), kBuiltinScenarioIds.end());
  });
  m.def("scenario_json", [](const std::string& id_or_path) {
    return serialize_scenario(resolve_scenario(id_or_path));
  }, py::arg("scenario"), "Canonical JSON for a built-in id or a scenario file.");

  m.def("run_simulation",
        [](const std::string& scenario, const SimulationConfig& config, std::size_t run_index) {
          const Scenario s = resolve_scenario(scenario);
          py::gil_scoped_release release;
          return run_simulation(s, config, run_index);
        },
        py::arg("scenario"), py::arg("config") = SimulationConfig{}, py::arg("run_index") = 0);
  m.def("run_ensemble",
        [](const std::string& scenario, const SimulationConfig& config) {
          const Scenario s = resolve_scenario(scenario);
          py::gil_scoped_release release;
          return run_ensemble(s, config);
        },
        py::arg("scenario"), py::arg("config") = SimulationConfig{});

  m.def("summarize", [](const std::vector<RunResult>& runs) { return stats_to_dict(summarize(runs)); });
  m.def("sensitivity", [](const std::vector<RunResult>& runs) {
    py::dict d;
    for (const auto& row : sensitivity_report(runs)) d[py::str(row.factor)] = row.rank_correlation;
    return d;
  });
  m.def("spearman", [](const std::vector<double>& x, const std::vector<double>& y) {
    return spearman(x, y);
  });
  m.def("results_csv", [](const std::vector<std::pair<std::string, std::vector<RunResult>>>& items) {
    std::vector<ScenarioEnsemble> ensembles;
    for (const auto& [name, runs] : items) ensembles.push_back({name, runs});
    return ensemble_csv(ensembles);
  }, py::arg("ensembles"), "Long-format CSV for a list of (scenario, runs) pairs.");

  m.def("tipping_point",
        [](const RunFactors& f, const std::string& scenario, int months) {
          return tipping_point(f, resolve_scenario(scenario), Catalog::standard(), months);
        },
        py::arg("factors"), py::arg("scenario"), py::arg("months") = kDefaultMonths);
  m.def("effective_price",
        [](std::size_t model_id, int year, const std::string& scenario, const RunFactors& f) {
          return effective_price(Catalog::standard().at(model_id), year, resolve_scenario(scenario), f);
        },
        py::arg("model_id"), py::arg("year"), py::arg("scenario"), py::arg("factors") = RunFactors{});
  m.def("effective_efficiency",
        [](std::size_t model_id, int year, const RunFactors& f) {
          return effective_efficiency(Catalog::standard().at(model_id), year, f);
        },
        py::arg("model_id"), py::arg("year"), py::arg("factors") = RunFactors{});
  m.def("catalog_csv", [] { return Catalog::standard().to_csv(); });
  m.def("generate_archetypes_csv",
        [](std::size_t count, std::uint64_t seed) {
          Rng rng{seed};
          return archetypes_to_csv(generate_archetypes(count, rng));
        },
        py::arg("count") = 87, py::arg("seed") = 2012);
}
