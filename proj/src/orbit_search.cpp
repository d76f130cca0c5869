#include "lorentz_orbits/orbit_search.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "lorentz_orbits/parallel.hpp"

namespace lorentz_orbits {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

const char* to_string(OrbitMethod m) { return m == OrbitMethod::shooting ? "shooting" : "collocation"; }

const char* to_string(SeedKind k) {
  switch (k) {
    case SeedKind::loop_around_source: return "loop_around_source";
    case SeedKind::kfold_circle: return "kfold_circle";
    case SeedKind::explicit_path: return "explicit_path";
    case SeedKind::constant: return "constant";
  }
  return "unknown";
}

std::string seed_label(const SeedSpec& spec) {
  if (!spec.id.empty()) return spec.id;
  std::ostringstream os;
  os << to_string(spec.kind);
  switch (spec.kind) {
    case SeedKind::loop_around_source:
      os << "_src" << spec.source << "_lambda" << spec.scale << "_k" << spec.winding;
      break;
    case SeedKind::kfold_circle:
      os << "_k" << spec.winding;
      break;
    default:
      break;
  }
  if (spec.phase != 0.0) os << "_phase" << spec.phase;
  if (spec.perturbation != 0.0) os << "_pert" << spec.perturbation << "_rng" << spec.rng_seed;
  return os.str();
}

namespace {

// Orthonormal u, w spanning the plane orthogonal to n, with u x w = n / |n|.
std::pair<Vec3, Vec3> plane_basis(const Vec3& normal) {
  const double len = norm(normal);
  if (!(len > 0.0)) throw InvalidArgument("seed plane normal must be nonzero");
  const Vec3 n = normal / len;
  const Vec3 helper = std::abs(n.x) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
  Vec3 u = helper - n * dot(helper, n);
  u /= norm(u);
  return {u, cross(n, u)};
}

std::vector<Vec3> circle_nodes(const Vec3& centre_offset, double radius, int winding, double phase,
                               const Vec3& normal, std::size_t n) {
  const auto [u, w] = plane_basis(normal);
  std::vector<Vec3> nodes(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double ang = kTwoPi * winding * (static_cast<double>(k) / static_cast<double>(n) + phase);
    nodes[k] = centre_offset + (u * std::cos(ang) + w * std::sin(ang)) * radius;
  }
  return nodes;
}

void perturb(std::vector<Vec3>& nodes, double amplitude, std::uint64_t rng_seed) {
  if (amplitude == 0.0) return;
  Vec3 lo = nodes.front();
  Vec3 hi = nodes.front();
  for (const auto& x : nodes) {
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], x[a]);
      hi[a] = std::max(hi[a], x[a]);
    }
  }
  const double scale = 0.5 * std::max(norm(hi - lo), 1e-12);
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  constexpr int kHarmonics = 3;
  std::array<std::array<double, 2 * kHarmonics + 1>, 3> c{};
  for (auto& row : c) {
    for (auto& v : row) v = coef(rng);
  }
  const auto n = nodes.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double s = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
    for (int a = 0; a < 3; ++a) {
      double d = c[a][0];
      for (int j = 1; j <= kHarmonics; ++j) d += c[a][2 * j - 1] * std::cos(j * s) + c[a][2 * j] * std::sin(j * s);
      nodes[k][a] += amplitude * scale * d / (2 * kHarmonics + 1);
    }
  }
}

}  // namespace

PeriodicPath generate_seed(const ElectromagneticModel& model, const SeedSpec& spec, double T) {
  if (!(T > 0.0)) throw InvalidArgument("seed period must be positive");
  const auto& k = model.constants();
  std::vector<Vec3> nodes;
  switch (spec.kind) {
    case SeedKind::loop_around_source: {
      const auto& traj = model.singular_trajectories();
      if (spec.source < 0 || static_cast<std::size_t>(spec.source) >= traj.size()) {
        throw InvalidArgument("seed source index out of range");
      }
      if (spec.winding < 1) throw InvalidArgument("seed winding must be >= 1");
      const auto& src = traj[static_cast<std::size_t>(spec.source)];
      const double loop_rate = kTwoPi * spec.winding / T;
      const double lambda_max = (0.9 * k.c - src.beta_max() * k.c) / loop_rate;
      if (!(lambda_max > 0.0)) throw InfeasibleSeed("source too fast for a sub-luminal loop");
      const double lambda = std::min(spec.scale, lambda_max);
      if (!(lambda > 0.0)) throw InfeasibleSeed("loop scale must be positive");
      const auto offsets = circle_nodes({}, lambda, spec.winding, spec.phase, spec.normal, spec.nodes);
      nodes.resize(spec.nodes);
      for (std::size_t n = 0; n < spec.nodes; ++n) {
        nodes[n] = src.position(T * static_cast<double>(n) / static_cast<double>(spec.nodes)) + offsets[n];
      }
      break;
    }
    case SeedKind::kfold_circle: {
      const auto* kepler = dynamic_cast<const KeplerModel*>(&model);
      if (!kepler) throw InvalidArgument("kfold_circle seeds need a Kepler model");
      const auto orbit = kepler_circular_orbit(kepler->alpha(), spec.winding, T, k);
      nodes = circle_nodes({}, orbit.radius, spec.winding, spec.phase, spec.normal, spec.nodes);
      break;
    }
    case SeedKind::explicit_path:
      nodes = spec.path;
      break;
    case SeedKind::constant:
      nodes.assign(spec.nodes, spec.point);
      break;
  }
  perturb(nodes, spec.perturbation, spec.rng_seed);
  PeriodicPath path(T, std::move(nodes));
  const auto eval = eval_action(model, path);
  if (!eval.feasible) throw InfeasibleSeed("seed '" + seed_label(spec) + "' is not feasible");
  if (spec.kind == SeedKind::loop_around_source && eval.max_speed_ratio > 0.9 + 1e-9) {
    throw InfeasibleSeed("loop seed exceeds 0.9 c");
  }
  return path;
}

ParticleState initial_state_of(const ElectromagneticModel& model, const PeriodicPath& path) {
  const auto vel = path_velocity(path);
  return {0.0, path[0], momentum_from_velocity(vel[0], model.constants())};
}

double closure_error(const ElectromagneticModel& model, const ParticleState& s0, double T, int steps) {
  try {
    const auto end = flow(model, s0, s0.t + T, steps);
    return norm(end.x - s0.x) + norm(end.p - s0.p);
  } catch (const Error&) {
    return kInf;
  }
}

double path_diameter(const PeriodicPath& p) {
  Vec3 lo = p[0];
  Vec3 hi = p[0];
  for (const auto& x : p.nodes()) {
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], x[a]);
      hi[a] = std::max(hi[a], x[a]);
    }
  }
  return norm(hi - lo);
}

double path_distance(const PeriodicPath& a, const PeriodicPath& b) {
  if (a.size() != b.size()) return kInf;
  const std::size_t n = a.size();
  double best = kInf;
  for (std::size_t s = 0; s < n; ++s) {
    double worst = 0.0;
    for (std::size_t k = 0; k < n && worst < best; ++k) worst = std::max(worst, norm(a[k] - b[(k + s) % n]));
    best = std::min(best, worst);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Shooting

namespace {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

Vec6 pack(const ParticleState& s) {
  Vec6 z;
  z << s.x.x, s.x.y, s.x.z, s.p.x, s.p.y, s.p.z;
  return z;
}

ParticleState unpack(const Vec6& z, double t0) { return {t0, {z[0], z[1], z[2]}, {z[3], z[4], z[5]}}; }

struct ShotEval {
  Vec6 F;
  ParticleState end;
};

ShotEval shoot(const ElectromagneticModel& model, const Vec6& z, double T, int steps) {
  const auto s0 = unpack(z, 0.0);
  const auto end = flow(model, s0, T, steps);
  return {pack(end) - z, end};
}

OrbitResult shooting_result(const ElectromagneticModel& model, const Vec6& z, double T, int steps,
                            const ShootingOptions& opts, int iterations, bool converged) {
  const auto s0 = unpack(z, 0.0);
  const auto traj = integrate(model, s0, T, steps);
  const std::size_t stride = static_cast<std::size_t>(steps) / opts.nodes;
  std::vector<Vec3> nodes(opts.nodes);
  for (std::size_t j = 0; j < opts.nodes; ++j) nodes[j] = traj.states[j * stride].x;
  PeriodicPath path(T, std::move(nodes));
  const auto& end = traj.states.back();
  OrbitResult r{path};
  r.method = OrbitMethod::shooting;
  r.closure_error = norm(end.x - s0.x) + norm(end.p - s0.p);
  r.action = eval_action(model, path);
  r.min_separation = std::min(traj.min_separation, r.action.min_separation);
  r.iterations = iterations;
  r.initial_state = s0;
  try {
    r.residual_norm = el_residual(model, path, {opts.speed_margin}).norm;
  } catch (const InfeasiblePath&) {
    r.residual_norm = kInf;
  }
  r.converged = converged && r.min_separation > model.collision_floor();
  return r;
}

}  // namespace

OrbitResult find_orbit_shooting(const ElectromagneticModel& model, const ParticleState& state0, double T,
                                const ShootingOptions& opts) {
  if (!(T > 0.0)) throw InvalidArgument("shooting period must be positive");
  if (opts.nodes < PeriodicPath::kMinNodes || opts.nodes % 2 != 0) throw InvalidArgument("invalid node count");
  const std::size_t per = (static_cast<std::size_t>(std::max(opts.steps, 1)) + opts.nodes - 1) / opts.nodes;
  const int steps = static_cast<int>(per * opts.nodes);

  Vec6 z = pack(state0);
  // Collisions on the nominal trajectory propagate; trial steps that collide are halved instead.
  ShotEval cur = shoot(model, z, T, steps);
  double fnorm = cur.F.norm();
  // convergence is judged on |dx| + |dp|, the reported closure error
  auto closure_of = [](const Vec6& F) { return F.head<3>().norm() + F.tail<3>().norm(); };
  int it = 0;
  for (; it < opts.max_iterations && !(closure_of(cur.F) <= opts.tol); ++it) {
    const double xscale = std::max(z.head<3>().norm(), 1e-3);
    const double pscale = std::max(z.tail<3>().norm(), 1e-3 * model.constants().m * model.constants().c);
    Mat6 J;
    for (int i = 0; i < 6; ++i) {
      const double h = opts.fd_step * std::max(std::abs(z[i]), i < 3 ? xscale : pscale);
      Vec6 zp = z;
      zp[i] += h;
      J.col(i) = (shoot(model, zp, T, steps).F - cur.F) / h;
    }
    Eigen::JacobiSVD<Mat6> svd(J, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const Vec6 uf = svd.matrixU().transpose() * cur.F;
    // forward differences carry ~fd_step relative noise; directions below it are dropped
    const double cutoff = std::max(1e-10, 10.0 * opts.fd_step) * sv[0];
    // Truncated pseudo-inverse keeping the `rank` largest singular values.
    auto truncated_step = [&](int rank) {
      Vec6 coef = Vec6::Zero();
      for (int i = 0; i < rank; ++i) {
        if (sv[i] > cutoff) coef[i] = -uf[i] / sv[i];
      }
      return Vec6(svd.matrixV() * coef);
    };

    auto attempt = [&](const Vec6& step, Vec6& best_z, ShotEval& best, double& best_norm) {
      const Vec6 trial = z + step;
      try {
        auto ev = shoot(model, trial, T, steps);
        const double tn = ev.F.norm();
        if (tn < best_norm) {
          best_z = trial;
          best = std::move(ev);
          best_norm = tn;
        }
      } catch (const Error&) {
        // collision or blow-up on the trial
      }
    };
    // Symmetries (time shift, rotations) leave near-null singular values of size ~|F|
    // away from the solution set; inverting them overshoots. Full steps at every
    // truncation rank are compared and the best decrease wins; halving is the fallback.
    int rank = 0;
    while (rank < 6 && sv[rank] > cutoff) ++rank;
    bool accepted = false;
    double alpha = 1.0;
    for (int halving = 0; !accepted && halving <= opts.max_halvings; ++halving, alpha *= 0.5) {
      Vec6 best_z = z;
      ShotEval best = cur;
      double best_norm = fnorm;
      for (int r = rank; r >= 1; --r) attempt(alpha * truncated_step(r), best_z, best, best_norm);
      if (best_norm < fnorm) {
        z = best_z;
        cur = std::move(best);
        fnorm = best_norm;
        accepted = true;
      }
    }
    if (!accepted) {
      throw OrbitNotConverged("shooting stalled at |F| = " + std::to_string(fnorm),
                              shooting_result(model, z, T, steps, opts, it, false));
    }
  }
  if (!(closure_of(cur.F) <= opts.tol)) {
    throw OrbitNotConverged("shooting did not converge, |F| = " + std::to_string(fnorm),
                            shooting_result(model, z, T, steps, opts, it, false));
  }
  return shooting_result(model, z, T, steps, opts, it, true);
}

// ---------------------------------------------------------------------------
// Collocation

namespace {

struct PathState {
  std::vector<Vec3> nodes;
  std::vector<Vec3> vel;
  std::vector<FieldValues> fields;
  Eigen::VectorXd residual;  // scaled by sqrt(h)
  double cost = kInf;
};

enum class TrialStatus { ok, infeasible };

TrialStatus evaluate_path(const ElectromagneticModel& model, double T, const CollocationOptions& opts,
                          PathState& ps) {
  const std::size_t n = ps.nodes.size();
  ps.vel = spectral_derivative(ps.nodes, T);
  const auto& k = model.constants();
  double vmax = 0.0;
  for (const auto& v : ps.vel) vmax = std::max(vmax, norm(v));
  if (!(vmax / k.c <= opts.speed_margin)) return TrialStatus::infeasible;
  ps.fields.resize(n);
  const double h = T / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double t = h * static_cast<double>(j);
    if (!(model.distance_to_singularities(t, ps.nodes[j]) > model.collision_floor())) return TrialStatus::infeasible;
    try {
      ps.fields[j] = model.evaluate(t, ps.nodes[j]);
    } catch (const CollisionProximity&) {
      return TrialStatus::infeasible;
    }
  }
  const auto r = el_residual_from(ps.vel, ps.fields, T, k);
  ps.residual.resize(static_cast<Eigen::Index>(3 * n));
  const double sh = std::sqrt(h);
  for (std::size_t j = 0; j < n; ++j) {
    for (int a = 0; a < 3; ++a) ps.residual[static_cast<Eigen::Index>(3 * j + a)] = sh * r[j][a];
  }
  ps.cost = ps.residual.squaredNorm();
  return ps.residual.allFinite() ? TrialStatus::ok : TrialStatus::infeasible;
}

// Column j*3+a is d residual / d x_j^a. Moving one node changes the field at that node
// only, and every velocity by a shifted copy of the derivative stencil.
Eigen::MatrixXd collocation_jacobian(const ElectromagneticModel& model, double T, const CollocationOptions& opts,
                                     const PathState& ps, std::span<const double> stencil) {
  const std::size_t n = ps.nodes.size();
  const auto& k = model.constants();
  const double h = T / static_cast<double>(n);
  const double sh = std::sqrt(h);
  double scale = 0.0;
  for (const auto& x : ps.nodes) scale = std::max(scale, norm(x));
  scale = std::max(scale, 1e-3);

  Eigen::MatrixXd J(3 * n, 3 * n);
  std::vector<Vec3> vel = ps.vel;
  std::vector<FieldValues> fields = ps.fields;
  for (std::size_t col = 0; col < n; ++col) {
    const double t = h * static_cast<double>(col);
    for (int a = 0; a < 3; ++a) {
      const double step = opts.fd_step * std::max(std::abs(ps.nodes[col][a]), scale);
      Vec3 xp = ps.nodes[col];
      xp[a] += step;
      fields[col] = model.evaluate(t, xp);
      for (std::size_t j = 0; j < n; ++j) vel[j][a] = ps.vel[j][a] + step * stencil[(j + n - col) % n];
      const auto r = el_residual_from(vel, fields, T, k);
      const auto c = static_cast<Eigen::Index>(3 * col + a);
      for (std::size_t j = 0; j < n; ++j) {
        for (int b = 0; b < 3; ++b) {
          J(static_cast<Eigen::Index>(3 * j + b), c) =
              (sh * r[j][b] - ps.residual[static_cast<Eigen::Index>(3 * j + b)]) / step;
        }
      }
      for (std::size_t j = 0; j < n; ++j) vel[j][a] = ps.vel[j][a];
      fields[col] = ps.fields[col];
    }
  }
  return J;
}

OrbitResult collocation_result(const ElectromagneticModel& model, double T, const PathState& ps,
                               const CollocationOptions& opts, const std::string& seed_id, int iterations,
                               bool converged) {
  PeriodicPath path(T, ps.nodes);
  OrbitResult r{path};
  r.method = OrbitMethod::collocation;
  r.seed_id = seed_id;
  r.iterations = iterations;
  r.residual_norm = std::sqrt(ps.cost);
  r.action = eval_action(model, path);
  r.min_separation = r.action.min_separation;
  r.initial_state = initial_state_of(model, path);
  r.closure_error = converged ? closure_error(model, r.initial_state, T, opts.verify_steps) : kInf;
  r.converged = converged && r.min_separation > model.collision_floor();
  return r;
}

}  // namespace

OrbitResult find_orbit_collocation(const ElectromagneticModel& model, const PeriodicPath& seed,
                                   const CollocationOptions& opts, const std::string& seed_id) {
  const double T = seed.period();
  const std::size_t n = seed.size();
  PathState cur;
  cur.nodes.assign(seed.nodes().begin(), seed.nodes().end());
  if (evaluate_path(model, T, opts, cur) != TrialStatus::ok) {
    throw InfeasiblePath("collocation seed '" + seed_id + "' violates the feasibility margin");
  }

  std::vector<double> impulse(n, 0.0);
  impulse[0] = 1.0;
  const auto stencil = spectral_derivative(impulse, T);

  double lambda = opts.lm_initial;
  int it = 0;
  bool last_reject_infeasible = false;
  // One Levenberg-Marquardt update; false when lambda exceeds lm_max without a decrease.
  auto lm_step = [&]() {
    const Eigen::MatrixXd J = collocation_jacobian(model, T, opts, cur, stencil);
    const Eigen::MatrixXd JtJ = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * cur.residual;
    Eigen::VectorXd diag = JtJ.diagonal();
    const double floor = 1e-12 * std::max(diag.maxCoeff(), 1e-300);
    for (Eigen::Index i = 0; i < diag.size(); ++i) diag[i] = std::max(diag[i], floor);

    while (lambda <= opts.lm_max) {
      Eigen::MatrixXd A = JtJ;
      A.diagonal() += lambda * diag;
      const Eigen::VectorXd delta = A.ldlt().solve(-g);

      PathState trial;
      TrialStatus status = TrialStatus::infeasible;
      double alpha = 1.0;
      for (int halving = 0; halving <= opts.max_halvings; ++halving, alpha *= 0.5) {
        trial.nodes = cur.nodes;
        for (std::size_t j = 0; j < n; ++j) {
          for (int a = 0; a < 3; ++a) trial.nodes[j][a] += alpha * delta[static_cast<Eigen::Index>(3 * j + a)];
        }
        status = evaluate_path(model, T, opts, trial);
        if (status == TrialStatus::ok) break;
      }
      if (status == TrialStatus::ok && trial.cost < cur.cost) {
        cur = std::move(trial);
        lambda = std::max(lambda / opts.lm_factor, 1e-15);
        last_reject_infeasible = false;
        return true;
      }
      last_reject_infeasible = status != TrialStatus::ok;
      lambda *= opts.lm_factor;
    }
    return false;
  };

  while (!(std::sqrt(cur.cost) <= opts.tol)) {
    if (it >= opts.max_iterations) {
      throw OrbitNotConverged("collocation reached the iteration limit at residual " +
                                  std::to_string(std::sqrt(cur.cost)),
                              collocation_result(model, T, cur, opts, seed_id, it, false));
    }
    ++it;
    if (!lm_step()) {
      auto best = collocation_result(model, T, cur, opts, seed_id, it, false);
      if (last_reject_infeasible) {
        throw StalledAtInfeasibility("collocation could not keep the path feasible (residual " +
                                     std::to_string(best.residual_norm) + ")");
      }
      throw OrbitNotConverged("collocation stalled at residual " + std::to_string(best.residual_norm), best);
    }
  }
  // Unstable orbits amplify the residual into the closure error, so a path that just
  // met tol gets a few more updates while they still pay off.
  for (int extra = 0; extra < opts.polish_iterations && std::sqrt(cur.cost) > opts.polish_factor * opts.tol; ++extra) {
    const double before = cur.cost;
    ++it;
    if (!lm_step() || cur.cost > 0.25 * before) break;
  }
  return collocation_result(model, T, cur, opts, seed_id, it, true);
}

// ---------------------------------------------------------------------------
// Multiplicity scan

namespace {

bool path_less(const PeriodicPath& a, const PeriodicPath& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t k = 0; k < n; ++k) {
    for (int c = 0; c < 3; ++c) {
      if (a[k][c] != b[k][c]) return a[k][c] < b[k][c];
    }
  }
  return a.size() < b.size();
}

}  // namespace

ScanResult multiplicity_scan(const ElectromagneticModel& model, double T, const std::vector<SeedSpec>& seeds,
                             const ScanOptions& opts) {
  if (seeds.empty()) throw InvalidArgument("multiplicity scan needs at least one seed");
  std::vector<std::optional<OrbitResult>> found(seeds.size());
  std::vector<std::optional<SeedFailure>> failed(seeds.size());

  parallel_for(seeds.size(), opts.threads, [&](std::size_t i) {
    const auto& spec = seeds[i];
    const std::string id = seed_label(spec);
    std::string failure_kind;
    std::string failure_msg;
    std::optional<PeriodicPath> seed;
    try {
      seed = generate_seed(model, spec, T);
      auto r = find_orbit_collocation(model, *seed, opts.collocation, id);
      r.rng_seed = spec.rng_seed;
      if (r.converged) {
        found[i] = std::move(r);
        return;
      }
      failure_kind = "no_convergence";
      failure_msg = "collocation result not converged";
    } catch (const Error& e) {
      failure_kind = e.kind();
      failure_msg = e.what();
    } catch (const std::exception& e) {
      failure_kind = "error";
      failure_msg = e.what();
    }
    if (opts.shooting_fallback && seed) {
      try {
        auto r = find_orbit_shooting(model, initial_state_of(model, *seed), T, opts.shooting);
        r.seed_id = id;
        r.rng_seed = spec.rng_seed;
        if (r.converged) {
          found[i] = std::move(r);
          return;
        }
      } catch (const Error& e) {
        failure_msg += std::string("; shooting fallback: ") + e.what();
      } catch (const std::exception& e) {
        failure_msg += std::string("; shooting fallback: ") + e.what();
      }
    }
    failed[i] = SeedFailure{id, failure_kind, failure_msg};
  });

  ScanResult out;
  std::vector<OrbitResult> converged;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (found[i]) converged.push_back(std::move(*found[i]));
    if (failed[i]) out.failures.push_back(std::move(*failed[i]));
  }
  std::stable_sort(converged.begin(), converged.end(), [](const OrbitResult& a, const OrbitResult& b) {
    if (a.action.total != b.action.total) return a.action.total < b.action.total;
    return path_less(a.path, b.path);
  });
  for (auto& r : converged) {
    bool duplicate = false;
    for (const auto& kept : out.orbits) {
      const double tol = opts.dedup_rel * std::max(path_diameter(r.path), path_diameter(kept.path));
      if (path_distance(r.path, kept.path) <= tol) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) {
      ++out.duplicates;
    } else {
      out.orbits.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace lorentz_orbits
