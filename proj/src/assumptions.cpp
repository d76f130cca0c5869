#include "lorentz_orbits/assumptions.hpp"

#include <limits>
#include <numbers>
#include <random>

#include "lorentz_orbits/parallel.hpp"

namespace lorentz_orbits {

std::vector<Vec3> sphere_directions(int count) {
  std::vector<Vec3> dirs(static_cast<std::size_t>(count));
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    dirs[static_cast<std::size_t>(i)] = {r * std::cos(phi), r * std::sin(phi), z};
  }
  return dirs;
}

namespace {

struct Sample {
  double t = 0.0;
  Vec3 x;
  int source = -1;
  double rho = 0.0;  // distance to the nearest singular trajectory at time t
  int shell = -1;    // -1 for bulk samples
  double V = 0.0;
  double absA = 0.0;
};

struct Geometry {
  double period = 1.0;
  double theta = 0.0;
  double min_separation = std::numeric_limits<double>::infinity();
  Vec3 centre;
};

Geometry geometry_of(const ElectromagneticModel& model) {
  Geometry g;
  const auto& traj = model.singular_trajectories();
  if (model.period() > 0.0) {
    g.period = model.period();
  } else if (!traj.empty()) {
    g.period = traj.front().period();
  }
  constexpr int kSamples = 1024;
  for (int k = 0; k < kSamples; ++k) {
    const double t = g.period * k / kSamples;
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const Vec3 ri = traj[i].position(t);
      g.theta = std::max(g.theta, norm(ri));
      for (std::size_t j = 0; j < i; ++j) g.min_separation = std::min(g.min_separation, norm(ri - traj[j].position(t)));
    }
  }
  for (const auto& s : traj) g.centre += s.mean();
  if (!traj.empty()) g.centre /= static_cast<double>(traj.size());
  return g;
}

Witness witness_of(const Sample& s, double value) {
  return {s.t, s.x, value, s.source, s.rho};
}

std::pair<int, double> nearest_source(const ElectromagneticModel& model, double t, const Vec3& x) {
  int best = -1;
  double d = std::numeric_limits<double>::infinity();
  const auto& traj = model.singular_trajectories();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double di = norm(x - traj[i].position(t));
    if (di < d) {
      d = di;
      best = static_cast<int>(i);
    }
  }
  return {best, d};
}

}  // namespace

AssumptionReport check_assumptions(const ElectromagneticModel& model, const ProbeSpec& spec) {
  const Geometry g = geometry_of(model);
  const auto& traj = model.singular_trajectories();
  const double c = model.constants().c;

  double delta = spec.delta;
  if (!(delta > 0.0)) delta = std::isfinite(g.min_separation) ? 0.5 * g.min_separation : 0.5;

  // Fixed enumeration order: source, shell, time, direction; then bulk.
  std::vector<Sample> samples;
  const auto dirs = sphere_directions(spec.n_directions);
  std::vector<double> shell_radius(static_cast<std::size_t>(spec.shell_levels));
  for (int j = 0; j < spec.shell_levels; ++j) shell_radius[static_cast<std::size_t>(j)] = delta * std::ldexp(1.0, -j);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    for (int j = 0; j < spec.shell_levels; ++j) {
      for (int m = 0; m < spec.n_times; ++m) {
        const double t = g.period * m / spec.n_times;
        const Vec3 ri = traj[i].position(t);
        for (const auto& d : dirs) {
          Sample s;
          s.t = t;
          s.x = ri + d * shell_radius[static_cast<std::size_t>(j)];
          s.source = static_cast<int>(i);
          s.rho = shell_radius[static_cast<std::size_t>(j)];
          s.shell = j;
          samples.push_back(s);
        }
      }
    }
  }
  {
    std::mt19937_64 rng(spec.rng_seed);
    const double half = g.theta + 2.0 * delta + 1.0;
    std::uniform_real_distribution<double> box(-half, half);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int b = 0; b < spec.bulk_samples; ++b) {
      Sample s;
      s.t = g.period * unit(rng);
      s.x = g.centre + Vec3{box(rng), box(rng), box(rng)};
      const auto [src, d] = nearest_source(model, s.t, s.x);
      if (src >= 0 && d < 1e-6 * std::max(delta, 1.0)) continue;
      s.source = src;
      s.rho = d;
      samples.push_back(s);
    }
  }

  parallel_for(samples.size(), spec.threads, [&](std::size_t k) {
    auto& s = samples[k];
    const auto f = model.evaluate(s.t, s.x);
    s.V = f.V;
    s.absA = norm(f.A);
  });

  AssumptionReport report;
  report.samples = samples.size();

  // (V)
  auto& sv = report.singular;
  sv.delta = delta;
  sv.shell_radius = shell_radius;
  sv.shell_kappa.assign(shell_radius.size(), std::numeric_limits<double>::infinity());
  sv.negative_everywhere = true;
  sv.kappa = std::numeric_limits<double>::infinity();
  const Sample* worst_v = nullptr;
  const Sample* first_nonneg = nullptr;
  for (const auto& s : samples) {
    if (!(s.V < 0.0)) {
      sv.negative_everywhere = false;
      if (!first_nonneg || (s.shell >= 0 && first_nonneg->shell < 0)) first_nonneg = &s;
    }
    if (s.shell < 0) continue;
    const double kappa = -s.V * s.rho;
    auto& slot = sv.shell_kappa[static_cast<std::size_t>(s.shell)];
    slot = std::min(slot, kappa);
    if (kappa < sv.kappa) {
      sv.kappa = kappa;
      worst_v = &s;
    }
  }
  if (worst_v) {
    sv.witness = witness_of(*worst_v, sv.kappa);
  } else if (first_nonneg) {
    sv.witness = witness_of(*first_nonneg, -first_nonneg->V * first_nonneg->rho);
  }
  if (!worst_v) sv.kappa = 0.0;
  sv.pass = sv.negative_everywhere && sv.kappa > 0.0 && !traj.empty();
  if (traj.empty()) sv.pass = sv.negative_everywhere;

  // (AV1)
  auto& av1 = report.vector_potential;
  av1.trivial = true;
  const Sample* worst_a = nullptr;
  for (const auto& s : samples) {
    if (s.absA != 0.0) av1.trivial = false;
    double kp = 0.0;
    if (s.V < 0.0) {
      kp = c * s.absA / (-s.V);
    } else if (s.absA > 0.0 || s.V > 0.0) {
      kp = std::numeric_limits<double>::infinity();
    }
    if (!worst_a || kp > av1.kappa_prime) {
      av1.kappa_prime = kp;
      worst_a = &s;
    }
  }
  if (worst_a) av1.witness = witness_of(*worst_a, av1.kappa_prime);
  av1.pass = av1.kappa_prime < 1.0;

  // (AV2)
  auto& av2 = report.decay;
  av2.theta = g.theta;
  std::vector<double> radii = spec.far_radii;
  if (radii.empty()) {
    const double base = std::max(g.theta, 1.0);
    for (int j = spec.far_min_level; j <= spec.far_max_level; ++j) radii.push_back(base * std::ldexp(1.0, j));
  }
  const auto far_dirs = sphere_directions(spec.far_directions);
  for (double radius : radii) {
    const std::size_t n = static_cast<std::size_t>(spec.far_times) * far_dirs.size();
    std::vector<double> q(n);
    parallel_for(n, spec.threads, [&](std::size_t k) {
      const double t = g.period * static_cast<double>(k / far_dirs.size()) / spec.far_times;
      const auto f = model.evaluate(t, far_dirs[k % far_dirs.size()] * radius);
      q[k] = std::abs(f.V) + norm(f.E) + norm(f.B);
    });
    DecayRow row;
    row.radius = radius;
    std::size_t arg = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (q[k] > row.max_quantity) {
        row.max_quantity = q[k];
        arg = k;
      }
    }
    const double t = g.period * static_cast<double>(arg / far_dirs.size()) / spec.far_times;
    const Vec3 x = far_dirs[arg % far_dirs.size()] * radius;
    const auto [src, d] = nearest_source(model, t, x);
    row.witness = {t, x, row.max_quantity, src, d};
    av2.fitted_c = std::max(av2.fitted_c, row.max_quantity * (radius - g.theta));
    av2.rows.push_back(row);
  }
  // Decay must be visible: strictly decreasing rows and at least a 4x drop overall.
  av2.pass = !av2.rows.empty();
  for (std::size_t j = 1; j < av2.rows.size(); ++j) {
    if (!(av2.rows[j].max_quantity < av2.rows[j - 1].max_quantity)) av2.pass = false;
  }
  if (av2.rows.size() >= 2 && !(av2.rows.back().max_quantity <= 0.25 * av2.rows.front().max_quantity)) {
    av2.pass = false;
  }
  if (av2.rows.size() >= 2 && av2.rows.front().max_quantity == 0.0) av2.pass = true;  // identically zero
  return report;
}

}  // namespace lorentz_orbits
