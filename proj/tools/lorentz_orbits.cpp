#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "lorentz_orbits/scenario.hpp"

namespace lo = lorentz_orbits;

int main(int argc, char** argv) {
  CLI::App app{"Periodic orbits of a charged particle in Lienard-Wiechert and Kepler-type fields"};
  app.require_subcommand(1, 1);

  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "Scenario JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "Output directory");
    sub->add_option("--seed-rng", seed, "RNG seed override");
    sub->add_option("--threads", threads, "Worker threads (fallback: LORENTZ_ORBITS_THREADS)")->check(CLI::PositiveNumber);
  };
  auto* simulate = app.add_subcommand("simulate", "Integrate one trajectory");
  auto* check = app.add_subcommand("check-assumptions", "Sample the (V), (AV1), (AV2) hypotheses");
  auto* find = app.add_subcommand("find-orbits", "Multiplicity scan for T-periodic orbits");
  auto* probe = app.add_subcommand("fields-probe", "Tabulate V, A, E, B on a grid");
  for (auto* sub : {simulate, check, find, probe}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : lo::kExitConfig;
  }

  if (!threads) {
    if (const char* env = std::getenv("LORENTZ_ORBITS_THREADS")) {
      try {
        threads = std::stoi(env);
      } catch (const std::exception&) {
        std::cerr << nlohmann::json{{"error", "config_error"}, {"message", "LORENTZ_ORBITS_THREADS is not an integer"}}
                  << '\n';
        return lo::kExitConfig;
      }
    }
  }

  try {
    const auto cfg = lo::load_config(config, seed, threads);
    if (simulate->parsed()) return lo::cmd_simulate(cfg, out);
    if (check->parsed()) return lo::cmd_check_assumptions(cfg, out);
    if (find->parsed()) return lo::cmd_find_orbits(cfg, out);
    return lo::cmd_fields_probe(cfg, out);
  } catch (const std::exception& e) {
    const auto [code, err] = lo::describe_error(e);
    std::cerr << err.dump() << '\n';
    return code;
  }
}
