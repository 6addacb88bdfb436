// Python bindings: scenario runner, catalog and a few direct entry points.

#include "quasistar/algebra.hpp"
#include "quasistar/ccr.hpp"
#include "quasistar/function_lab.hpp"
#include "quasistar/gns.hpp"
#include "quasistar/scenarios.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
namespace qs = quasistar;
using nlohmann::json;

namespace {

std::string run_scenario(const std::string& module, const std::string& operation, const std::string& parameters,
                         std::uint64_t seed) {
  json cfg = {{"scenarios",
               {{{"name", operation}, {"module", module}, {"operation", operation},
                 {"parameters", json::parse(parameters)}, {"output_path", operation}}}}};
  const auto config = qs::scenarios::parse_config(cfg);
  const auto& s = config.scenarios.front();
  const auto o = qs::scenarios::run_scenario(s, seed);
  json tables = json::object();
  for (const auto& t : o.tables) tables[t.name] = qs::scenarios::csv_to_json(t.csv);
  return json{{"passed", o.passed}, {"result", o.result}, {"failures", o.failures}, {"tables", tables}}.dump();
}

std::string gns_matrix(int n, const std::string& state) {
  const auto a = qs::algebra::matrix_algebra(n);
  const auto omega = state == "trace" ? qs::algebra::normalized_trace(a, n) : qs::algebra::first_entry_state(a, n);
  const auto rep = qs::gns::gns_construct(a, omega);
  return json{{"gns_rep", qs::gns::to_json(rep)}, {"diagnostics", qs::gns::to_json(qs::gns::verify_gns(a, omega, rep))}}
      .dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "quasistar core";
  py::register_exception<qs::scenarios::ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("catalog_json", [](std::optional<std::string> module) { return qs::scenarios::catalog_json(module).dump(); },
        py::arg("module") = py::none());
  m.def("run_scenario", &run_scenario, py::arg("module"), py::arg("operation"), py::arg("parameters") = "{}",
        py::arg("seed") = 0, py::call_guard<py::gil_scoped_release>());
  m.def("gns_matrix", &gns_matrix, py::arg("n"), py::arg("state") = "trace");
  m.def(
      "boundedness_classifier",
      [](double p, std::optional<double> r) {
        const auto c = qs::function_lab::boundedness_classifier(p, r);
        return py::make_tuple(qs::function_lab::to_string(c.tag), c.s);
      },
      py::arg("p"), py::arg("r") = py::none());
  m.def(
      "graph_seminorm",
      [](int frequency, int k) { return qs::ccr::graph_seminorm(qs::ccr::TrigPoly::mode(frequency), k); },
      py::arg("frequency"), py::arg("k"));
}
