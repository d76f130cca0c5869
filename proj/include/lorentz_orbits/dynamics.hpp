#pragma once

#include <iosfwd>
#include <vector>

#include "lorentz_orbits/fields.hpp"

namespace lorentz_orbits {

/// Phase-space point in momentum form, p = m v / sqrt(1 - |v|^2 / c^2).
struct ParticleState {
  double t = 0.0;
  Vec3 x;
  Vec3 p;
};

/// v = c p / sqrt(m^2 c^2 + |p|^2); |v| < c for every finite p.
Vec3 velocity_from_momentum(const Vec3& p, const PhysicalConstants& k);
/// Inverse of velocity_from_momentum; requires |v| < c.
Vec3 momentum_from_velocity(const Vec3& v, const PhysicalConstants& k);
/// gamma = sqrt(1 + |p|^2 / (m c)^2).
double lorentz_factor(const Vec3& p, const PhysicalConstants& k);

struct StateDerivative {
  Vec3 dx;
  Vec3 dp;
};

/// dx/dt = v(p), dp/dt = q (E + v x B).
StateDerivative lorentz_rhs(const ElectromagneticModel& model, const ParticleState& s);

struct Trajectory {
  std::vector<ParticleState> states;
  /// Smallest distance to any singular trajectory seen at the step points (+inf if none).
  double min_separation = 0.0;
};

/// Classical RK4 with fixed step (t_end - t0) / steps. Throws CollisionProximity when
/// a stage comes within the model's collision floor and StepRejected on non-finite stages.
Trajectory integrate(const ElectromagneticModel& model, const ParticleState& state0, double t_end, int steps);

/// Same as integrate() but keeps only the final state.
ParticleState flow(const ElectromagneticModel& model, const ParticleState& state0, double t_end, int steps);

/// H = c sqrt(m^2 c^2 + |p|^2) + q V(x); NotAutonomous for time-dependent models.
double energy(const ElectromagneticModel& model, const ParticleState& s);

struct CircularOrbit {
  double radius = 0.0;
  double speed = 0.0;
  ParticleState state0;
};

/// Circular orbit of the unforced relativistic Kepler problem that closes k times
/// in time T: solves m gamma v^2 / rho = alpha / rho^2 with 2 pi rho / v = T / k by
/// bisection on v in (0, c). The state at t = 0 is (rho, 0, 0) moving along +y.
CircularOrbit kepler_circular_orbit(double alpha, int k, double T, const PhysicalConstants& constants);

/// Writes the trajectory CSV (t,x,y,z,px,py,pz,v_over_c,V,H); H is empty for
/// time-dependent models. Floats use 17 significant digits.
void write_trajectory_csv(std::ostream& os, const ElectromagneticModel& model, const Trajectory& traj);

}  // namespace lorentz_orbits
