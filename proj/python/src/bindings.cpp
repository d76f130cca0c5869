#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "lorentz_orbits/scenario.hpp"

namespace py = pybind11;
namespace lo = lorentz_orbits;

namespace {

lo::ScenarioConfig parse(const std::string& config_json, std::optional<std::uint64_t> seed, std::optional<int> threads) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(config_json);
  } catch (const nlohmann::json::exception& e) {
    throw lo::ConfigError(std::string("invalid JSON: ") + e.what());
  }
  return lo::parse_config(doc, seed, threads);
}

py::tuple vec(const lo::Vec3& v) { return py::make_tuple(v[0], v[1], v[2]); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of lorentz_orbits; the public API lives in the parent package.";

  auto base = py::register_exception<lo::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<lo::ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<lo::CollisionProximity>(m, "CollisionProximity", base.ptr());

  m.def(
      "resolve_config",
      [](const std::string& config_json, std::optional<std::uint64_t> seed, std::optional<int> threads) {
        return parse(config_json, seed, threads).resolved.dump();
      },
      py::arg("config_json"), py::arg("seed") = py::none(), py::arg("threads") = py::none());

  m.def(
      "evaluate_fields",
      [](const std::string& config_json, double t, const std::array<double, 3>& x) {
        const auto cfg = parse(config_json, {}, {});
        py::gil_scoped_release release;
        const auto f = cfg.model->evaluate(t, {x[0], x[1], x[2]});
        py::gil_scoped_acquire acquire;
        py::dict d;
        d["V"] = f.V;
        d["A"] = vec(f.A);
        d["E"] = vec(f.E);
        d["B"] = vec(f.B);
        return d;
      },
      py::arg("config_json"), py::arg("t"), py::arg("x"));

  m.def(
      "check_assumptions",
      [](const std::string& config_json, std::optional<int> threads) {
        const auto cfg = parse(config_json, {}, threads);
        lo::AssumptionReport report;
        {
          py::gil_scoped_release release;
          report = lo::check_assumptions(*cfg.model, cfg.assumptions);
        }
        return lo::to_json(report).dump();
      },
      py::arg("config_json"), py::arg("threads") = py::none());

  m.def(
      "find_orbits",
      [](const std::string& config_json, std::optional<std::uint64_t> seed, std::optional<int> threads) {
        const auto cfg = parse(config_json, seed, threads);
        if (!cfg.orbits) throw lo::ConfigError("config has no orbits block");
        lo::ScanResult scan;
        {
          py::gil_scoped_release release;
          scan = lo::multiplicity_scan(*cfg.model, cfg.orbits->period, cfg.orbits->seeds, cfg.orbits->scan);
        }
        nlohmann::json out = nlohmann::json::array();
        for (const auto& o : scan.orbits) out.push_back(lo::to_json(o));
        return out.dump();
      },
      py::arg("config_json"), py::arg("seed") = py::none(), py::arg("threads") = py::none());

  m.def(
      "run_command",
      [](const std::string& command, const std::string& config_json, const std::filesystem::path& out,
         std::optional<std::uint64_t> seed, std::optional<int> threads) {
        const auto cfg = parse(config_json, seed, threads);
        py::gil_scoped_release release;
        if (command == "simulate") return lo::cmd_simulate(cfg, out);
        if (command == "check-assumptions") return lo::cmd_check_assumptions(cfg, out);
        if (command == "find-orbits") return lo::cmd_find_orbits(cfg, out);
        if (command == "fields-probe") return lo::cmd_fields_probe(cfg, out);
        throw lo::InvalidArgument("unknown command " + command);
      },
      py::arg("command"), py::arg("config_json"), py::arg("out"), py::arg("seed") = py::none(),
      py::arg("threads") = py::none());

  m.def(
      "kepler_circular_radius",
      [](double alpha, int k, double period, double c) {
        lo::PhysicalConstants units;
        units.c = c;
        return lo::kepler_circular_orbit(alpha, k, period, units).radius;
      },
      py::arg("alpha"), py::arg("k"), py::arg("period"), py::arg("c"));
}
