#include "lorentz_orbits/scenario.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace lorentz_orbits {

using nlohmann::json;

namespace {

// Strict view of one JSON object: every accessed key is recorded, missing keys are
// filled with their defaults in place, and finish() rejects anything left over.
class Reader {
 public:
  Reader(json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (obj_.is_null()) obj_ = json::object();
    if (!obj_.is_object()) throw ConfigError(where_ + " must be an object");
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  double number(const std::string& key, std::optional<double> def = {}) {
    auto& v = slot(key, def ? json(*def) : json());
    if (!v.is_number()) throw ConfigError(at(key) + " must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(at(key) + " must be finite");
    return d;
  }

  long integer(const std::string& key, std::optional<long> def = {}) {
    auto& v = slot(key, def ? json(*def) : json());
    if (!v.is_number_integer()) throw ConfigError(at(key) + " must be an integer");
    return v.get<long>();
  }

  bool boolean(const std::string& key, std::optional<bool> def = {}) {
    auto& v = slot(key, def ? json(*def) : json());
    if (!v.is_boolean()) throw ConfigError(at(key) + " must be a boolean");
    return v.get<bool>();
  }

  std::string string(const std::string& key, std::optional<std::string> def = {}) {
    auto& v = slot(key, def ? json(*def) : json());
    if (!v.is_string()) throw ConfigError(at(key) + " must be a string");
    return v.get<std::string>();
  }

  Vec3 vec3(const std::string& key, std::optional<Vec3> def = {}) {
    auto& v = slot(key, def ? json::array({def->x, def->y, def->z}) : json());
    return to_vec3(v, at(key));
  }

  std::vector<Vec3> vec3_list(const std::string& key, std::optional<std::vector<Vec3>> def = {}) {
    json d;
    if (def) {
      d = json::array();
      for (const auto& x : *def) d.push_back({x.x, x.y, x.z});
    }
    auto& v = slot(key, d);
    if (!v.is_array()) throw ConfigError(at(key) + " must be an array of [x,y,z] triples");
    std::vector<Vec3> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(to_vec3(v[i], at(key) + "[" + std::to_string(i) + "]"));
    return out;
  }

  std::vector<double> number_list(const std::string& key, std::optional<std::vector<double>> def = {}) {
    auto& v = slot(key, def ? json(*def) : json());
    if (!v.is_array()) throw ConfigError(at(key) + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError(at(key) + " must contain numbers only");
      out.push_back(e.get<double>());
    }
    return out;
  }

  json& object(const std::string& key, bool create = true) {
    if (!has(key)) {
      if (!create) throw ConfigError(at(key) + " is required");
      obj_[key] = json::object();
    }
    seen_.insert(key);
    return obj_[key];
  }

  json& raw(const std::string& key) {
    if (!has(key)) throw ConfigError(at(key) + " is required");
    seen_.insert(key);
    return obj_[key];
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError("unknown key " + at(it.key()));
    }
  }

  std::string at(const std::string& key) const { return where_ + "." + key; }

 private:
  json& slot(const std::string& key, const json& def) {
    seen_.insert(key);
    if (!has(key)) {
      if (def.is_null()) throw ConfigError(at(key) + " is required");
      obj_[key] = def;
    }
    return obj_[key];
  }

  static Vec3 to_vec3(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 3) throw ConfigError(where + " must be an [x,y,z] triple");
    Vec3 out;
    for (int a = 0; a < 3; ++a) {
      if (!v[static_cast<std::size_t>(a)].is_number()) throw ConfigError(where + " must contain numbers");
      out[a] = v[static_cast<std::size_t>(a)].get<double>();
    }
    if (!out.finite()) throw ConfigError(where + " must be finite");
    return out;
  }

  json& obj_;
  std::string where_;
  std::set<std::string> seen_;
};

PhysicalConstants parse_constants(json& node) {
  Reader r(node, "constants");
  PhysicalConstants k;
  k.c = r.number("c", k.c);
  k.eps0 = r.number("eps0", k.eps0);
  k.m = r.number("m", k.m);
  k.q = r.number("q", k.q);
  r.finish();
  try {
    k.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return k;
}

ModelPtr parse_model(json& node, const PhysicalConstants& k) {
  Reader r(node, "model");
  const std::string type = r.string("type");
  ModelPtr model;
  if (type == "lienard-wiechert") {
    auto& list = r.raw("sources");
    if (!list.is_array() || list.empty()) throw ConfigError("model.sources must be a nonempty array");
    std::vector<ChargeSource> sources;
    for (std::size_t i = 0; i < list.size(); ++i) {
      Reader s(list[i], "model.sources[" + std::to_string(i) + "]");
      const double charge = s.number("charge");
      const double period = s.number("period");
      const Vec3 mean = s.vec3("mean", Vec3{});
      const auto cos_c = s.vec3_list("cos", std::vector<Vec3>{});
      const auto sin_c = s.vec3_list("sin", std::vector<Vec3>{});
      s.finish();
      std::vector<Harmonic> h(std::max(cos_c.size(), sin_c.size()));
      for (std::size_t j = 0; j < cos_c.size(); ++j) h[j].cos_coeff = cos_c[j];
      for (std::size_t j = 0; j < sin_c.size(); ++j) h[j].sin_coeff = sin_c[j];
      sources.push_back({SourceTrajectory(period, mean, std::move(h), k.c), charge});
    }
    model = std::make_shared<const LienardWiechertModel>(SourceEnsemble(std::move(sources)), k);
  } else if (type == "kepler") {
    const double alpha = r.number("alpha", 1.0);
    const bool strict = r.boolean("strict", false);
    Reader f(r.object("forcing"), "model.forcing");
    const std::string kind = f.string("kind", "none");
    Forcing forcing;
    if (kind == "none") {
      forcing = Forcing::none();
    } else if (kind == "gaussian") {
      const double eps = f.number("epsilon");
      const double period = f.number("period", 0.0);
      const double modulation = f.number("modulation", 1.0);
      forcing = Forcing::gaussian(eps, period, modulation);
    } else {
      throw ConfigError("model.forcing.kind must be 'none' or 'gaussian'");
    }
    f.finish();
    model = kepler_model(alpha, std::move(forcing), k, strict);
  } else if (type == "builtin:zero") {
    model = zero_field_model(k);
  } else if (type == "builtin:uniform-magnetic") {
    model = uniform_magnetic_model(r.vec3("B", Vec3{0.0, 0.0, 1.0}), k);
  } else if (type == "builtin:uniform-electric") {
    model = uniform_electric_model(r.vec3("E", Vec3{1.0, 0.0, 0.0}), k);
  } else {
    throw ConfigError("unknown model type '" + type + "'");
  }
  r.finish();
  return model;
}

SimulateSettings parse_simulate(json& node, const ElectromagneticModel& model) {
  Reader r(node, "simulate");
  SimulateSettings s;
  s.t0 = r.number("t0", 0.0);
  s.steps = static_cast<int>(r.integer("steps", 10000));
  if (s.steps < 1) throw ConfigError("simulate.steps must be >= 1");
  Reader init(r.object("initial", false), "simulate.initial");
  const auto& k = model.constants();
  if (init.has("kepler_circular")) {
    Reader kc(init.object("kepler_circular"), "simulate.initial.kepler_circular");
    const int winding = static_cast<int>(kc.integer("k", 1));
    const double period = kc.number("period");
    kc.finish();
    const auto* kepler = dynamic_cast<const KeplerModel*>(&model);
    if (!kepler) throw ConfigError("simulate.initial.kepler_circular needs a kepler model");
    s.initial = kepler_circular_orbit(kepler->alpha(), winding, period, k).state0;
    if (!r.has("t_end")) s.t_end = s.t0 + period;
  } else {
    s.initial.x = init.vec3("x");
    if (init.has("v")) {
      try {
        s.initial.p = momentum_from_velocity(init.vec3("v"), k);
      } catch (const Error& e) {
        throw ConfigError(std::string("simulate.initial.v: ") + e.what());
      }
    } else {
      s.initial.p = init.vec3("p", Vec3{});
    }
  }
  init.finish();
  s.initial.t = s.t0;
  s.t_end = r.number("t_end", s.t_end != 0.0 ? std::optional<double>(s.t_end) : std::nullopt);
  r.finish();
  return s;
}

SeedKind parse_seed_kind(const std::string& kind) {
  if (kind == "loop_around_source") return SeedKind::loop_around_source;
  if (kind == "kfold_circle") return SeedKind::kfold_circle;
  if (kind == "explicit" || kind == "explicit_path") return SeedKind::explicit_path;
  if (kind == "constant") return SeedKind::constant;
  throw ConfigError("unknown seed kind '" + kind + "'");
}

OrbitSettings parse_orbits(json& node, const ElectromagneticModel& model, std::uint64_t rng_seed) {
  Reader r(node, "orbits");
  OrbitSettings o;
  const double default_period = model.period();
  o.period = r.number("period", default_period > 0.0 ? std::optional<double>(default_period) : std::nullopt);
  if (!(o.period > 0.0)) throw ConfigError("orbits.period must be positive");
  const auto nodes = static_cast<std::size_t>(r.integer("nodes", 128));
  if (nodes < PeriodicPath::kMinNodes || nodes % 2 != 0) throw ConfigError("orbits.nodes must be even and >= 8");

  auto& sc = o.scan;
  sc.collocation.tol = r.number("tol_colloc", sc.collocation.tol);
  sc.collocation.max_iterations = static_cast<int>(r.integer("max_iterations", sc.collocation.max_iterations));
  sc.collocation.verify_steps = static_cast<int>(r.integer("verify_steps", sc.collocation.verify_steps));
  sc.collocation.lm_initial = r.number("lm_initial", sc.collocation.lm_initial);
  sc.collocation.speed_margin = r.number("speed_margin", sc.collocation.speed_margin);
  sc.shooting.tol = r.number("tol_shoot", sc.shooting.tol);
  sc.shooting.steps = static_cast<int>(r.integer("shoot_steps", sc.shooting.steps));
  sc.shooting.max_iterations = static_cast<int>(r.integer("shoot_max_iterations", sc.shooting.max_iterations));
  sc.shooting.speed_margin = sc.collocation.speed_margin;
  sc.shooting.nodes = nodes;
  sc.dedup_rel = r.number("dedup_rel", sc.dedup_rel);
  sc.shooting_fallback = r.boolean("shooting_fallback", true);

  auto& list = r.raw("seeds");
  if (!list.is_array()) throw ConfigError("orbits.seeds must be an array");
  for (std::size_t i = 0; i < list.size(); ++i) {
    Reader s(list[i], "orbits.seeds[" + std::to_string(i) + "]");
    SeedSpec spec;
    spec.kind = parse_seed_kind(s.string("kind"));
    spec.nodes = nodes;
    spec.id = s.string("id", "");
    spec.phase = s.number("phase", 0.0);
    spec.perturbation = s.number("perturbation", 0.0);
    spec.rng_seed = static_cast<std::uint64_t>(s.integer("rng_seed", static_cast<long>(rng_seed + i)));
    switch (spec.kind) {
      case SeedKind::loop_around_source:
        spec.source = static_cast<int>(s.integer("source", 0));
        spec.scale = s.number("scale", 1.0);
        spec.winding = static_cast<int>(s.integer("k", 1));
        spec.normal = s.vec3("normal", Vec3{0.0, 0.0, 1.0});
        break;
      case SeedKind::kfold_circle:
        spec.winding = static_cast<int>(s.integer("k", 1));
        spec.normal = s.vec3("normal", Vec3{0.0, 0.0, 1.0});
        break;
      case SeedKind::explicit_path:
        spec.path = s.vec3_list("path");
        break;
      case SeedKind::constant:
        spec.point = s.vec3("point");
        break;
    }
    s.finish();
    o.seeds.push_back(std::move(spec));
  }
  r.finish();
  return o;
}

ProbeSpec parse_assumptions(json& node) {
  Reader r(node, "assumptions");
  ProbeSpec p;
  p.delta = r.number("delta", 0.0);
  p.shell_levels = static_cast<int>(r.integer("shell_levels", p.shell_levels));
  p.n_times = static_cast<int>(r.integer("n_times", p.n_times));
  p.n_directions = static_cast<int>(r.integer("n_directions", p.n_directions));
  p.bulk_samples = static_cast<int>(r.integer("bulk_samples", p.bulk_samples));
  p.far_min_level = static_cast<int>(r.integer("far_min_level", p.far_min_level));
  p.far_max_level = static_cast<int>(r.integer("far_max_level", p.far_max_level));
  p.far_radii = r.number_list("far_radii", std::vector<double>{});
  p.far_times = static_cast<int>(r.integer("far_times", p.far_times));
  p.far_directions = static_cast<int>(r.integer("far_directions", p.far_directions));
  r.finish();
  if (p.shell_levels < 1 || p.n_times < 1 || p.n_directions < 1 || p.far_times < 1 || p.far_directions < 1 ||
      p.bulk_samples < 0) {
    throw ConfigError("assumptions sample counts must be positive");
  }
  return p;
}

ProbeGrid parse_probe(json& node) {
  Reader r(node, "probe");
  ProbeGrid g;
  g.times = r.number_list("times", std::vector<double>{0.0});
  if (g.times.empty()) throw ConfigError("probe.times must not be empty");
  g.points = r.vec3_list("points", std::vector<Vec3>{});
  if (r.has("lattice")) {
    Reader l(r.object("lattice"), "probe.lattice");
    const Vec3 lo = l.vec3("min");
    const Vec3 hi = l.vec3("max");
    auto& counts = l.raw("counts");
    l.finish();
    if (!counts.is_array() || counts.size() != 3) throw ConfigError("probe.lattice.counts must be [nx,ny,nz]");
    std::array<long, 3> n{};
    for (int a = 0; a < 3; ++a) {
      if (!counts[static_cast<std::size_t>(a)].is_number_integer()) throw ConfigError("probe.lattice.counts must be integers");
      n[static_cast<std::size_t>(a)] = counts[static_cast<std::size_t>(a)].get<long>();
      if (n[static_cast<std::size_t>(a)] < 1) throw ConfigError("probe.lattice.counts must be >= 1");
    }
    auto coord = [&](int a, long i) {
      const long na = n[static_cast<std::size_t>(a)];
      return na == 1 ? lo[a] : lo[a] + (hi[a] - lo[a]) * static_cast<double>(i) / static_cast<double>(na - 1);
    };
    for (long i = 0; i < n[0]; ++i) {
      for (long j = 0; j < n[1]; ++j) {
        for (long k = 0; k < n[2]; ++k) g.points.push_back({coord(0, i), coord(1, j), coord(2, k)});
      }
    }
  }
  r.finish();
  if (g.points.empty()) throw ConfigError("probe needs points or a lattice");
  return g;
}

void put(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

void write_json(const std::filesystem::path& file, const json& j) {
  std::ofstream os(file);
  if (!os) throw Error("io_error", "cannot write " + file.string());
  os << std::setw(2) << j << '\n';
}

std::ofstream open_out(const std::filesystem::path& file) {
  std::ofstream os(file);
  if (!os) throw Error("io_error", "cannot write " + file.string());
  return os;
}

void prepare_out(const ScenarioConfig& cfg, const std::filesystem::path& out) {
  std::filesystem::create_directories(out);
  write_json(out / "resolved_config.json", cfg.resolved);
}

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

ScenarioConfig parse_config(const json& doc, std::optional<std::uint64_t> rng_seed, std::optional<int> threads) {
  ScenarioConfig cfg;
  cfg.resolved = doc;
  try {
    Reader top(cfg.resolved, "config");
    cfg.rng_seed = static_cast<std::uint64_t>(top.integer("rng_seed", 1));
    if (rng_seed) {
      cfg.rng_seed = *rng_seed;
      cfg.resolved["rng_seed"] = *rng_seed;
    }
    cfg.threads = static_cast<int>(top.integer("threads", 1));
    if (threads) {
      cfg.threads = *threads;
      cfg.resolved["threads"] = *threads;
    }
    if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
    cfg.constants = parse_constants(top.object("constants"));
    cfg.model = parse_model(top.object("model", false), cfg.constants);
    if (top.has("simulate")) cfg.simulate = parse_simulate(top.object("simulate"), *cfg.model);
    if (top.has("orbits")) {
      cfg.orbits = parse_orbits(top.object("orbits"), *cfg.model, cfg.rng_seed);
      cfg.orbits->scan.threads = cfg.threads;
    }
    cfg.assumptions = parse_assumptions(top.object("assumptions"));
    cfg.assumptions.rng_seed = cfg.rng_seed;
    cfg.assumptions.threads = cfg.threads;
    if (top.has("probe")) cfg.probe = parse_probe(top.object("probe"));
    top.finish();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& file, std::optional<std::uint64_t> rng_seed,
                           std::optional<int> threads) {
  std::ifstream is(file);
  if (!is) throw ConfigError("cannot read config file " + file.string());
  json doc;
  try {
    doc = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc, rng_seed, threads);
}

json to_json(const Witness& w) {
  return {{"t", w.t}, {"x", vec_json(w.x)}, {"value", w.value}, {"source", w.source},
          {"distance_to_source", w.distance_to_source}};
}

json to_json(const AssumptionReport& report) {
  const auto& v = report.singular;
  const auto& a = report.vector_potential;
  const auto& d = report.decay;
  json rows = json::array();
  for (const auto& row : d.rows) {
    rows.push_back({{"radius", row.radius}, {"max_quantity", row.max_quantity}, {"witness", to_json(row.witness)}});
  }
  json shells = json::array();
  for (std::size_t j = 0; j < v.shell_radius.size(); ++j) {
    shells.push_back({{"radius", v.shell_radius[j]}, {"kappa", v.shell_kappa[j]}});
  }
  return {
      {"all_pass", report.all_pass()},
      {"samples", report.samples},
      {"V", {{"pass", v.pass}, {"negative_everywhere", v.negative_everywhere}, {"kappa", v.kappa},
             {"delta", v.delta}, {"shells", shells}, {"witness", to_json(v.witness)}}},
      {"AV1", {{"pass", a.pass}, {"trivial", a.trivial}, {"kappa_prime", a.kappa_prime},
               {"witness", to_json(a.witness)}}},
      {"AV2", {{"pass", d.pass}, {"theta", d.theta}, {"fitted_C", d.fitted_c}, {"rows", rows}}},
  };
}

json to_json(const OrbitResult& r) {
  double mean_radius = 0.0;
  for (const auto& x : r.path.nodes()) mean_radius += norm(x);
  mean_radius /= static_cast<double>(r.path.size());
  auto finite_or_null = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  return {
      {"seed_id", r.seed_id},
      {"method", to_string(r.method)},
      {"converged", r.converged},
      {"iterations", r.iterations},
      {"residual_norm", finite_or_null(r.residual_norm)},
      {"closure_error", finite_or_null(r.closure_error)},
      {"action", {{"psi", finite_or_null(r.action.psi)}, {"phi", finite_or_null(r.action.phi)},
                  {"total", finite_or_null(r.action.total)}, {"feasible", r.action.feasible},
                  {"max_speed_ratio", r.action.max_speed_ratio}}},
      {"min_separation", finite_or_null(r.min_separation)},
      {"mean_radius", mean_radius},
      {"period", r.path.period()},
      {"nodes", r.path.size()},
      {"initial_state", {{"x", vec_json(r.initial_state.x)}, {"p", vec_json(r.initial_state.p)}}},
      {"rng_seed", r.rng_seed},
  };
}

void write_orbit_csv(std::ostream& os, const ElectromagneticModel& model, const PeriodicPath& path) {
  const auto vel = path_velocity(path);
  os << "k,t,x,y,z,vx,vy,vz,v_over_c\n";
  for (std::size_t k = 0; k < path.size(); ++k) {
    os << k << ',';
    for (double v : {path.time(k), path[k].x, path[k].y, path[k].z, vel[k].x, vel[k].y, vel[k].z}) {
      put(os, v);
      os << ',';
    }
    put(os, norm(vel[k]) / model.constants().c);
    os << '\n';
  }
}

std::string settings_hash(const json& settings) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : settings.dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

int cmd_simulate(const ScenarioConfig& cfg, const std::filesystem::path& out) {
  if (!cfg.simulate) throw ConfigError("config has no 'simulate' section");
  const auto start = std::chrono::steady_clock::now();
  const auto& model = *cfg.model;
  const auto& s = *cfg.simulate;
  prepare_out(cfg, out);

  const auto traj = integrate(model, s.initial, s.t_end, s.steps);
  {
    auto os = open_out(out / "trajectory.csv");
    write_trajectory_csv(os, model, traj);
  }
  double max_beta = 0.0;
  for (const auto& st : traj.states) max_beta = std::max(max_beta, norm(velocity_from_momentum(st.p, model.constants())) / model.constants().c);
  json summary = {
      {"command", "simulate"},
      {"model", model.name()},
      {"steps", s.steps},
      {"t0", s.t0},
      {"t_end", s.t_end},
      {"autonomous", model.autonomous()},
      {"min_separation", std::isfinite(traj.min_separation) ? json(traj.min_separation) : json(nullptr)},
      {"max_v_over_c", max_beta},
      {"final_state", {{"t", traj.states.back().t}, {"x", vec_json(traj.states.back().x)},
                       {"p", vec_json(traj.states.back().p)}}},
  };
  if (model.autonomous()) {
    const double h0 = energy(model, traj.states.front());
    double drift = 0.0;
    for (const auto& st : traj.states) drift = std::max(drift, std::abs(energy(model, st) - h0));
    summary["energy_initial"] = h0;
    summary["energy_final"] = energy(model, traj.states.back());
    summary["energy_drift"] = drift / std::max(std::abs(h0), 1e-300);
  } else {
    summary["energy_drift"] = nullptr;
  }
  summary["wall_time_s"] = seconds_since(start);
  write_json(out / "summary.json", summary);
  return kExitOk;
}

int cmd_check_assumptions(const ScenarioConfig& cfg, const std::filesystem::path& out) {
  prepare_out(cfg, out);
  const auto report = check_assumptions(*cfg.model, cfg.assumptions);
  json j = to_json(report);
  j["model"] = cfg.model->name();
  write_json(out / "assumptions.json", j);
  return report.all_pass() ? kExitOk : kExitAssumptionFailed;
}

int cmd_find_orbits(const ScenarioConfig& cfg, const std::filesystem::path& out) {
  if (!cfg.orbits) throw ConfigError("config has no 'orbits' section");
  if (cfg.orbits->seeds.empty()) throw ConfigError("no seeds");
  const auto start = std::chrono::steady_clock::now();
  prepare_out(cfg, out);
  const auto& o = *cfg.orbits;
  json settings = cfg.resolved.at("orbits");
  settings.erase("seeds");
  const std::string hash = settings_hash(settings);

  const auto scan = multiplicity_scan(*cfg.model, o.period, o.seeds, o.scan);
  json orbits = json::array();
  for (std::size_t i = 0; i < scan.orbits.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "orbit_%03zu", i);
    {
      auto os = open_out(out / (std::string(name) + ".csv"));
      write_orbit_csv(os, *cfg.model, scan.orbits[i].path);
    }
    json j = to_json(scan.orbits[i]);
    j["index"] = i;
    j["csv"] = std::string(name) + ".csv";
    j["settings_hash"] = hash;
    write_json(out / (std::string(name) + ".json"), j);
    orbits.push_back(j);
  }
  json failures = json::array();
  for (const auto& f : scan.failures) failures.push_back({{"seed_id", f.seed_id}, {"kind", f.kind}, {"message", f.message}});
  json summary = {
      {"command", "find-orbits"},
      {"model", cfg.model->name()},
      {"period", o.period},
      {"seeds", o.seeds.size()},
      {"converged", scan.orbits.size()},
      {"duplicates", scan.duplicates},
      {"settings_hash", hash},
      {"orbits", orbits},
      {"failures", failures},
      {"wall_time_s", seconds_since(start)},
  };
  write_json(out / "orbits.json", summary);
  return scan.orbits.empty() ? kExitNoOrbit : kExitOk;
}

int cmd_fields_probe(const ScenarioConfig& cfg, const std::filesystem::path& out) {
  if (!cfg.probe) throw ConfigError("config has no 'probe' section");
  prepare_out(cfg, out);
  const auto& model = *cfg.model;
  auto os = open_out(out / "fields.csv");
  os << "t,x,y,z,V,Ax,Ay,Az,Ex,Ey,Ez,Bx,By,Bz,E_norm,flag\n";
  std::size_t flagged = 0;
  for (double t : cfg.probe->times) {
    for (const auto& x : cfg.probe->points) {
      for (double v : {t, x.x, x.y, x.z}) {
        put(os, v);
        os << ',';
      }
      bool ok = model.distance_to_singularities(t, x) >= model.collision_floor();
      FieldValues f;
      if (ok) {
        try {
          f = model.evaluate(t, x);
        } catch (const CollisionProximity&) {
          ok = false;
        }
      }
      if (ok) {
        for (double v : {f.V, f.A.x, f.A.y, f.A.z, f.E.x, f.E.y, f.E.z, f.B.x, f.B.y, f.B.z, norm(f.E)}) {
          put(os, v);
          os << ',';
        }
        os << "ok\n";
      } else {
        ++flagged;
        os << ",,,,,,,,,,,collision\n";
      }
    }
  }
  write_json(out / "probe_summary.json", {{"command", "fields-probe"},
                                          {"model", model.name()},
                                          {"rows", cfg.probe->times.size() * cfg.probe->points.size()},
                                          {"flagged", flagged}});
  return kExitOk;
}

std::pair<int, json> describe_error(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    int code = kExitError;
    if (dynamic_cast<const CollisionProximity*>(err)) {
      code = kExitCollision;
    } else if (dynamic_cast<const ConfigError*>(err) || dynamic_cast<const SuperluminalSource*>(err) ||
               dynamic_cast<const InvalidArgument*>(err) || dynamic_cast<const ValidationFailure*>(err)) {
      code = kExitConfig;
    }
    json j = {{"error", err->kind()}, {"message", err->what()}};
    if (const auto* c = dynamic_cast<const CollisionProximity*>(err)) {
      j["time"] = c->time();
      j["distance"] = c->distance();
    }
    return {code, j};
  }
  return {kExitError, {{"error", "internal"}, {"message", e.what()}}};
}

}  // namespace lorentz_orbits
