#pragma once

#include <vector>

#include "lorentz_orbits/fields.hpp"

namespace lorentz_orbits {

/// Discrete action of a closed path, split into the kinetic part psi and the
/// potential part phi. Infeasible paths (speed >= c or a node on a singular
/// trajectory) get total = +inf; the diagnostics are still filled in.
struct ActionEvaluation {
  double psi = 0.0;
  double phi = 0.0;
  double total = 0.0;
  bool feasible = false;
  double min_separation = 0.0;
  double max_speed_ratio = 0.0;
};

struct ActionOptions {
  /// Gradient and residual require max_speed / c <= speed_margin.
  double speed_margin = 0.995;
};

/// psi = h sum m c^2 (1 - sqrt(1 - |v_k|^2 / c^2)), phi = h sum q (-V + A . v_k),
/// h = T / N, with v_k the spectral velocities and nodes at t_k = k h.
ActionEvaluation eval_action(const ElectromagneticModel& model, const PeriodicPath& path);

/// Exact gradient of the discrete total action with respect to the node positions.
/// Throws InfeasiblePath unless the path clears the collision floor and the speed margin.
std::vector<Vec3> action_gradient(const ElectromagneticModel& model, const PeriodicPath& path,
                                  const ActionOptions& opts = {});

struct ElResidual {
  std::vector<Vec3> residuals;
  double norm = 0.0;  ///< sqrt(h sum |R_k|^2)
};

/// R_k = D[m gamma v]_k - q (E(t_k, x_k) + v_k x B(t_k, x_k)), D the spectral derivative.
ElResidual el_residual(const ElectromagneticModel& model, const PeriodicPath& path, const ActionOptions& opts = {});

/// Same residual, from precomputed node velocities and fields. Used by the collocation
/// Jacobian, which perturbs one node at a time.
std::vector<Vec3> el_residual_from(std::span<const Vec3> velocity, std::span<const FieldValues> fields,
                                   double period, const PhysicalConstants& k);

/// min over nodes and singular trajectories of |x_k - r_i(t_k)|.
double min_separation(const ElectromagneticModel& model, const PeriodicPath& path);

}  // namespace lorentz_orbits
