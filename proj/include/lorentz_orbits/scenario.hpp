#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lorentz_orbits/assumptions.hpp"
#include "lorentz_orbits/orbit_search.hpp"

namespace lorentz_orbits {

struct SimulateSettings {
  double t0 = 0.0;
  double t_end = 0.0;
  int steps = 10000;
  ParticleState initial;
};

struct OrbitSettings {
  double period = 0.0;
  ScanOptions scan;
  std::vector<SeedSpec> seeds;
};

struct ProbeGrid {
  std::vector<double> times;
  std::vector<Vec3> points;
};

/// Fully-resolved scenario. `resolved` is the input document with every default
/// filled in; writing it back out and re-running reproduces the run.
struct ScenarioConfig {
  PhysicalConstants constants;
  ModelPtr model;
  std::optional<SimulateSettings> simulate;
  std::optional<OrbitSettings> orbits;
  ProbeSpec assumptions;
  std::optional<ProbeGrid> probe;
  std::uint64_t rng_seed = 1;
  int threads = 1;
  nlohmann::json resolved;
};

/// Parses a scenario document. Unknown keys and type mismatches raise ConfigError.
/// `rng_seed` / `threads` override the document when set.
ScenarioConfig parse_config(const nlohmann::json& doc, std::optional<std::uint64_t> rng_seed = {},
                            std::optional<int> threads = {});
ScenarioConfig load_config(const std::filesystem::path& file, std::optional<std::uint64_t> rng_seed = {},
                           std::optional<int> threads = {});

nlohmann::json to_json(const AssumptionReport& report);
nlohmann::json to_json(const OrbitResult& orbit);
nlohmann::json to_json(const Witness& w);

/// CSV of the orbit nodes: k,t,x,y,z,vx,vy,vz,v_over_c.
void write_orbit_csv(std::ostream& os, const ElectromagneticModel& model, const PeriodicPath& path);

/// FNV-1a hash of the serialized solver settings, as 16 hex digits.
std::string settings_hash(const nlohmann::json& settings);

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,
  kExitCollision = 2,
  kExitConfig = 3,
  kExitAssumptionFailed = 4,
  kExitNoOrbit = 5,
};

/// Command implementations. Each writes its outputs plus resolved_config.json into
/// `out` and returns the exit code; library errors propagate as exceptions.
int cmd_simulate(const ScenarioConfig& cfg, const std::filesystem::path& out);
int cmd_check_assumptions(const ScenarioConfig& cfg, const std::filesystem::path& out);
int cmd_find_orbits(const ScenarioConfig& cfg, const std::filesystem::path& out);
int cmd_fields_probe(const ScenarioConfig& cfg, const std::filesystem::path& out);

/// Maps an exception to (exit code, error JSON).
std::pair<int, nlohmann::json> describe_error(const std::exception& e);

}  // namespace lorentz_orbits
