#include "lorentz_orbits/action.hpp"

#include <limits>
#include <string>

namespace lorentz_orbits {

double min_separation(const ElectromagneticModel& model, const PeriodicPath& path) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < path.size(); ++k) d = std::min(d, model.distance_to_singularities(path.time(k), path[k]));
  return d;
}

ActionEvaluation eval_action(const ElectromagneticModel& model, const PeriodicPath& path) {
  const auto& k = model.constants();
  const double h = path.step();
  const auto vel = path_velocity(path);

  ActionEvaluation out;
  out.min_separation = min_separation(model, path);
  double vmax = 0.0;
  for (const auto& v : vel) vmax = std::max(vmax, norm(v));
  out.max_speed_ratio = vmax / k.c;

  const bool speed_ok = out.max_speed_ratio < 1.0;
  const bool clear = out.min_separation > model.collision_floor();

  if (speed_ok) {
    const double c2 = k.c * k.c;
    double psi = 0.0;
    for (const auto& v : vel) psi += k.m * c2 * (1.0 - std::sqrt(1.0 - norm2(v) / c2));
    out.psi = h * psi;
  } else {
    out.psi = std::numeric_limits<double>::infinity();
  }

  bool phi_ok = clear;
  if (clear) {
    double phi = 0.0;
    try {
      for (std::size_t n = 0; n < path.size(); ++n) {
        const auto f = model.evaluate(path.time(n), path[n]);
        phi += -f.V + dot(f.A, vel[n]);
      }
      out.phi = h * k.q * phi;
    } catch (const CollisionProximity&) {
      phi_ok = false;
    }
  }
  if (!phi_ok) out.phi = std::numeric_limits<double>::infinity();

  out.feasible = speed_ok && phi_ok;
  out.total = out.feasible ? out.psi + out.phi : std::numeric_limits<double>::infinity();
  return out;
}

namespace {

void require_strictly_feasible(const ElectromagneticModel& model, const PeriodicPath& path,
                               std::span<const Vec3> vel, const ActionOptions& opts) {
  double vmax = 0.0;
  for (const auto& v : vel) vmax = std::max(vmax, norm(v));
  const double ratio = vmax / model.constants().c;
  if (!(ratio <= opts.speed_margin)) {
    throw InfeasiblePath("path speed ratio " + std::to_string(ratio) + " exceeds margin " +
                         std::to_string(opts.speed_margin));
  }
  const double sep = min_separation(model, path);
  if (!(sep > model.collision_floor())) {
    throw InfeasiblePath("path within collision floor of a singular trajectory");
  }
}

std::vector<Vec3> kinetic_momentum(std::span<const Vec3> vel, const PhysicalConstants& k) {
  std::vector<Vec3> p(vel.size());
  const double c2 = k.c * k.c;
  for (std::size_t n = 0; n < vel.size(); ++n) p[n] = vel[n] * (k.m / std::sqrt(1.0 - norm2(vel[n]) / c2));
  return p;
}

}  // namespace

std::vector<Vec3> action_gradient(const ElectromagneticModel& model, const PeriodicPath& path,
                                  const ActionOptions& opts) {
  const auto& k = model.constants();
  const double h = path.step();
  const auto vel = path_velocity(path);
  require_strictly_feasible(model, path, vel, opts);

  // S = h sum_j [psi(v_j) + q(-V_j + A_j . v_j)], v = D x with D^T = -D, so
  // dS/dx_k = h q (-grad V + J_A^T v)_k - h D[m gamma v + q A]_k.
  const std::size_t n = path.size();
  std::vector<Vec3> conj(n);
  std::vector<Vec3> grad(n);
  const auto mom = kinetic_momentum(vel, k);
  try {
    for (std::size_t j = 0; j < n; ++j) {
      const double t = path.time(j);
      const auto f = model.evaluate(t, path[j]);
      const auto d = model.potential_derivatives(t, path[j]);
      conj[j] = mom[j] + f.A * k.q;
      grad[j] = (-d.grad_V + d.jac_A.transpose_times(vel[j])) * (h * k.q);
    }
  } catch (const CollisionProximity& e) {
    throw InfeasiblePath(std::string("collision while evaluating gradient: ") + e.what());
  }
  const auto dconj = spectral_derivative(conj, path.period());
  for (std::size_t j = 0; j < n; ++j) grad[j] -= dconj[j] * h;
  return grad;
}

std::vector<Vec3> el_residual_from(std::span<const Vec3> velocity, std::span<const FieldValues> fields,
                                   double period, const PhysicalConstants& k) {
  const auto mom = kinetic_momentum(velocity, k);
  auto res = spectral_derivative(mom, period);
  for (std::size_t j = 0; j < res.size(); ++j) res[j] -= (fields[j].E + cross(velocity[j], fields[j].B)) * k.q;
  return res;
}

ElResidual el_residual(const ElectromagneticModel& model, const PeriodicPath& path, const ActionOptions& opts) {
  const auto vel = path_velocity(path);
  require_strictly_feasible(model, path, vel, opts);
  std::vector<FieldValues> fields(path.size());
  try {
    for (std::size_t j = 0; j < path.size(); ++j) fields[j] = model.evaluate(path.time(j), path[j]);
  } catch (const CollisionProximity& e) {
    throw InfeasiblePath(std::string("collision while evaluating residual: ") + e.what());
  }
  ElResidual out;
  out.residuals = el_residual_from(vel, fields, path.period(), model.constants());
  double sum = 0.0;
  for (const auto& r : out.residuals) sum += norm2(r);
  out.norm = std::sqrt(path.step() * sum);
  return out;
}

}  // namespace lorentz_orbits
