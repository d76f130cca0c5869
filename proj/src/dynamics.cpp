#include "lorentz_orbits/dynamics.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

namespace lorentz_orbits {

Vec3 velocity_from_momentum(const Vec3& p, const PhysicalConstants& k) {
  const double mc = k.m * k.c;
  Vec3 v = p * (k.c / std::sqrt(mc * mc + norm2(p)));
  // for |p| >> mc the exact speed rounds up to c
  const double speed = norm(v);
  if (speed >= k.c) v *= std::nextafter(k.c, 0.0) / speed;
  return v;
}

Vec3 momentum_from_velocity(const Vec3& v, const PhysicalConstants& k) {
  const double beta2 = norm2(v) / (k.c * k.c);
  if (!(beta2 < 1.0)) throw InvalidArgument("velocity must be below c");
  return v * (k.m / std::sqrt(1.0 - beta2));
}

double lorentz_factor(const Vec3& p, const PhysicalConstants& k) {
  const double mc = k.m * k.c;
  return std::sqrt(1.0 + norm2(p) / (mc * mc));
}

StateDerivative lorentz_rhs(const ElectromagneticModel& model, const ParticleState& s) {
  const auto& k = model.constants();
  const Vec3 v = velocity_from_momentum(s.p, k);
  const auto f = model.evaluate(s.t, s.x);
  return {v, (f.E + cross(v, f.B)) * k.q};
}

namespace {

void check_clearance(const ElectromagneticModel& model, double t, const Vec3& x, double& min_sep) {
  const double d = model.distance_to_singularities(t, x);
  min_sep = std::min(min_sep, d);
  if (d < model.collision_floor()) {
    throw CollisionProximity("trajectory reached the collision floor at t = " + std::to_string(t), t, d);
  }
}

// A fixed step can jump across a singularity without any stage landing near it;
// test the chord between consecutive states in the frame of each singular trajectory.
void check_chord(const ElectromagneticModel& model, const ParticleState& a, const ParticleState& b) {
  for (const auto& r : model.singular_trajectories()) {
    const Vec3 d0 = a.x - r.position(a.t);
    const Vec3 d1 = b.x - r.position(b.t);
    const Vec3 dd = d1 - d0;
    const double len2 = norm2(dd);
    const double s = len2 > 0.0 ? std::clamp(-dot(d0, dd) / len2, 0.0, 1.0) : 0.0;
    const double d = norm(d0 + dd * s);
    if (d < model.collision_floor()) {
      const double t = a.t + s * (b.t - a.t);
      throw CollisionProximity("trajectory crossed the collision floor near t = " + std::to_string(t), t, d);
    }
  }
}

bool finite(const StateDerivative& d) { return d.dx.finite() && d.dp.finite(); }

template <class Visit>
void rk4(const ElectromagneticModel& model, const ParticleState& state0, double t_end, int steps, Visit&& visit) {
  if (steps < 1) throw InvalidArgument("integrate needs steps >= 1");
  if (!state0.x.finite() || !state0.p.finite()) throw InvalidArgument("initial state is not finite");
  const double h = (t_end - state0.t) / steps;
  double min_sep = std::numeric_limits<double>::infinity();
  ParticleState s = state0;
  check_clearance(model, s.t, s.x, min_sep);
  visit(s, min_sep);
  auto stage = [&](double t, const Vec3& x, const Vec3& p) {
    check_clearance(model, t, x, min_sep);
    const auto d = lorentz_rhs(model, {t, x, p});
    if (!finite(d)) throw StepRejected("non-finite stage at t = " + std::to_string(t), t);
    return d;
  };
  for (int n = 0; n < steps; ++n) {
    const double t = state0.t + h * n;
    const ParticleState prev = s;
    const auto k1 = stage(t, s.x, s.p);
    const auto k2 = stage(t + 0.5 * h, s.x + k1.dx * (0.5 * h), s.p + k1.dp * (0.5 * h));
    const auto k3 = stage(t + 0.5 * h, s.x + k2.dx * (0.5 * h), s.p + k2.dp * (0.5 * h));
    const auto k4 = stage(t + h, s.x + k3.dx * h, s.p + k3.dp * h);
    s.x += (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx) * (h / 6.0);
    s.p += (k1.dp + 2.0 * k2.dp + 2.0 * k3.dp + k4.dp) * (h / 6.0);
    s.t = (n + 1 == steps) ? t_end : state0.t + h * (n + 1);
    if (!s.x.finite() || !s.p.finite()) throw StepRejected("non-finite state at t = " + std::to_string(s.t), s.t);
    check_clearance(model, s.t, s.x, min_sep);
    check_chord(model, prev, s);
    visit(s, min_sep);
  }
}

}  // namespace

Trajectory integrate(const ElectromagneticModel& model, const ParticleState& state0, double t_end, int steps) {
  Trajectory out;
  out.states.reserve(static_cast<std::size_t>(steps) + 1);
  rk4(model, state0, t_end, steps, [&](const ParticleState& s, double min_sep) {
    out.states.push_back(s);
    out.min_separation = min_sep;
  });
  return out;
}

ParticleState flow(const ElectromagneticModel& model, const ParticleState& state0, double t_end, int steps) {
  ParticleState last;
  rk4(model, state0, t_end, steps, [&](const ParticleState& s, double) { last = s; });
  return last;
}

double energy(const ElectromagneticModel& model, const ParticleState& s) {
  if (!model.autonomous()) throw NotAutonomous("energy is conserved only for time-independent potentials");
  const auto& k = model.constants();
  const double mc = k.m * k.c;
  return k.c * std::sqrt(mc * mc + norm2(s.p)) + k.q * model.evaluate(s.t, s.x).V;
}

CircularOrbit kepler_circular_orbit(double alpha, int k, double T, const PhysicalConstants& constants) {
  constants.validate();
  if (!(alpha > 0.0) || k < 1 || !(T > 0.0) || !std::isfinite(alpha) || !std::isfinite(T)) {
    throw NoSolution("circular orbit needs alpha > 0, k >= 1 and T > 0");
  }
  const double c = constants.c;
  const double m = constants.m;
  // Eliminating rho = v T / (2 pi k) leaves m gamma(v) v^3 = 2 pi k alpha / T, whose
  // left side increases monotonically from 0 to +inf on (0, c).
  const double target = 2.0 * std::numbers::pi * k * alpha / T;
  auto residual = [&](double v) {
    const double g = 1.0 / std::sqrt(1.0 - (v / c) * (v / c));
    return m * g * v * v * v - target;
  };
  double lo = 0.0;
  double hi = c;
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (residual(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double v = 0.5 * (lo + hi);
  if (!(v > 0.0 && v < c)) throw NoSolution("no circular orbit with speed in (0, c)");
  CircularOrbit out;
  out.speed = v;
  out.radius = v * T / (2.0 * std::numbers::pi * k);
  out.state0.t = 0.0;
  out.state0.x = {out.radius, 0.0, 0.0};
  out.state0.p = momentum_from_velocity({0.0, v, 0.0}, constants);
  return out;
}

namespace {
void put(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}
}  // namespace

void write_trajectory_csv(std::ostream& os, const ElectromagneticModel& model, const Trajectory& traj) {
  const auto& k = model.constants();
  const bool autonomous = model.autonomous();
  os << "t,x,y,z,px,py,pz,v_over_c,V,H\n";
  for (const auto& s : traj.states) {
    const Vec3 v = velocity_from_momentum(s.p, k);
    const double V = model.evaluate(s.t, s.x).V;
    for (double val : {s.t, s.x.x, s.x.y, s.x.z, s.p.x, s.p.y, s.p.z, norm(v) / k.c, V}) {
      put(os, val);
      os << ',';
    }
    if (autonomous) put(os, energy(model, s));
    os << '\n';
  }
}

}  // namespace lorentz_orbits
