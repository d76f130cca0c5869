#include "lorentz_orbits/fields.hpp"

#include <limits>
#include <numbers>
#include <random>

namespace lorentz_orbits {

ElectromagneticModel::ElectromagneticModel(PhysicalConstants constants, std::vector<SourceTrajectory> singular,
                                           double collision_floor)
    : constants_(constants), singular_(std::move(singular)), collision_floor_(collision_floor) {
  constants_.validate();
}

double ElectromagneticModel::distance_to_singularities(double t, const Vec3& x) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& s : singular_) d = std::min(d, norm(x - s.position(t)));
  return d;
}

PotentialDerivatives ElectromagneticModel::potential_derivatives(double t, const Vec3& x) const {
  PotentialDerivatives out;
  const double hx = 1e-6 * std::max(1.0, norm(x));
  for (int b = 0; b < 3; ++b) {
    Vec3 xp = x;
    Vec3 xm = x;
    xp[b] += hx;
    xm[b] -= hx;
    const auto fp = evaluate(t, xp);
    const auto fm = evaluate(t, xm);
    out.grad_V[b] = (fp.V - fm.V) / (2.0 * hx);
    for (int a = 0; a < 3; ++a) out.jac_A.row[a][b] = (fp.A[a] - fm.A[a]) / (2.0 * hx);
  }
  if (!autonomous()) {
    const double ht = 1e-6 * std::max(1.0, std::abs(t));
    const auto fp = evaluate(t + ht, x);
    const auto fm = evaluate(t - ht, x);
    out.dV_dt = (fp.V - fm.V) / (2.0 * ht);
    out.dA_dt = (fp.A - fm.A) / (2.0 * ht);
  }
  return out;
}

FieldValues total_fields(const ElectromagneticModel& model, double t, const Vec3& x) {
  return model.evaluate(t, x);
}

// ---------------------------------------------------------------------------

RetardedFrame lw_frame(const ChargeSource& source, double t, const Vec3& x, const PhysicalConstants& k,
                       double collision_floor) {
  const auto& traj = source.trajectory;
  RetardedTimeOptions opts;
  opts.collision_floor = collision_floor;
  const auto rt = retarded_time(traj, t, x, opts);
  const auto kin = traj.eval(rt.t_ret);

  RetardedFrame f;
  f.t_ret = rt.t_ret;
  f.iterations = rt.iterations;
  f.r_ret = kin.r;
  f.rdot_ret = kin.rdot;
  f.rddot_ret = kin.rddot;
  const Vec3 sep = x - kin.r;
  f.dist = norm(sep);
  if (!(f.dist > 0.0)) throw CollisionProximity("observation point coincides with a source", t, f.dist);
  f.eta = sep / f.dist;
  f.beta = kin.rdot / k.c;
  f.beta_dot = kin.rddot / k.c;
  f.doppler = 1.0 - dot(f.eta, f.beta);
  return f;
}

LwPotentials lw_potentials(const ChargeSource& source, const RetardedFrame& f, const PhysicalConstants& k) {
  LwPotentials p;
  p.V = source.charge * k.coulomb_factor() / (f.doppler * f.dist);
  p.A = f.beta * (p.V / k.c);
  return p;
}

LwFields lw_fields(const ChargeSource& source, const RetardedFrame& f, const PhysicalConstants& k) {
  const double kq = source.charge * k.coulomb_factor();
  const double inv_gamma2 = 1.0 - norm2(f.beta);
  const double d3 = f.doppler * f.doppler * f.doppler;
  const Vec3 eb = f.eta - f.beta;
  const double vel_scale = inv_gamma2 / (d3 * f.dist * f.dist);
  const Vec3 accel_term = cross(f.eta, cross(eb, f.beta_dot)) / (k.c * d3 * f.dist);
  LwFields out;
  out.E = (eb * vel_scale + accel_term) * kq;
  // eta x (eta - beta) = -eta x beta, so B vanishes exactly for a charge at rest
  out.B = (cross(f.eta, f.beta) * (-vel_scale) + cross(f.eta, accel_term)) * (kq / k.c);
  return out;
}

PotentialDerivatives lw_potential_derivatives(const ChargeSource& source, const RetardedFrame& f,
                                              const PhysicalConstants& k) {
  const double kq = source.charge * k.coulomb_factor();
  const double s = f.dist * f.doppler;
  const double V = kq / s;
  const Vec3 eb = f.eta - f.beta;
  const Vec3 grad_tret = f.eta * (-1.0 / (k.c * f.doppler));
  const double dtret_dt = 1.0 / f.doppler;
  // s = |R| - R . beta(t_ret); both x and t enter through R and t_ret.
  const double coupling = k.c * dot(eb, f.beta) + f.dist * dot(f.eta, f.beta_dot);
  const Vec3 grad_s = eb - grad_tret * coupling;
  const double ds_dt = -coupling * dtret_dt;

  PotentialDerivatives d;
  d.grad_V = grad_s * (-kq / (s * s));
  d.dV_dt = -kq * ds_dt / (s * s);
  for (int a = 0; a < 3; ++a) {
    d.jac_A.row[a] = (grad_tret * (f.beta_dot[a] * V) + d.grad_V * f.beta[a]) / k.c;
  }
  d.dA_dt = (f.beta_dot * (V * dtret_dt) + f.beta * d.dV_dt) / k.c;
  return d;
}

LwPotentials lw_potentials(const ChargeSource& source, double t, const Vec3& x, const PhysicalConstants& k) {
  return lw_potentials(source, lw_frame(source, t, x, k), k);
}

LwFields lw_fields(const ChargeSource& source, double t, const Vec3& x, const PhysicalConstants& k) {
  return lw_fields(source, lw_frame(source, t, x, k), k);
}

namespace {
std::vector<SourceTrajectory> trajectories_of(const SourceEnsemble& e) {
  std::vector<SourceTrajectory> out;
  for (const auto& s : e.sources()) out.push_back(s.trajectory);
  return out;
}
}  // namespace

LienardWiechertModel::LienardWiechertModel(SourceEnsemble ensemble, PhysicalConstants constants)
    : ElectromagneticModel(constants, trajectories_of(ensemble), ensemble.collision_floor()),
      ensemble_(std::move(ensemble)) {
  for (const auto& s : ensemble_.sources()) {
    if (std::abs(s.trajectory.c() - constants.c) > 1e-12 * constants.c) {
      throw InvalidArgument("source trajectory built with a different speed of light");
    }
  }
}

FieldValues LienardWiechertModel::evaluate(double t, const Vec3& x) const {
  FieldValues out;
  for (const auto& src : ensemble_.sources()) {
    const auto f = lw_frame(src, t, x, constants(), collision_floor());
    const auto p = lw_potentials(src, f, constants());
    const auto e = lw_fields(src, f, constants());
    out.V += p.V;
    out.A += p.A;
    out.E += e.E;
    out.B += e.B;
  }
  return out;
}

PotentialDerivatives LienardWiechertModel::potential_derivatives(double t, const Vec3& x) const {
  PotentialDerivatives out;
  for (const auto& src : ensemble_.sources()) {
    const auto f = lw_frame(src, t, x, constants(), collision_floor());
    const auto d = lw_potential_derivatives(src, f, constants());
    out.grad_V += d.grad_V;
    out.dV_dt += d.dV_dt;
    for (int a = 0; a < 3; ++a) out.jac_A.row[a] += d.jac_A.row[a];
    out.dA_dt += d.dA_dt;
  }
  return out;
}

bool LienardWiechertModel::autonomous() const {
  for (const auto& s : ensemble_.sources()) {
    if (!s.trajectory.is_static()) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

Forcing Forcing::none() {
  Forcing f;
  f.value = [](double, const Vec3&) { return 0.0; };
  f.gradient = [](double, const Vec3&) { return Vec3{}; };
  f.time_derivative = [](double, const Vec3&) { return 0.0; };
  f.label = "none";
  return f;
}

Forcing Forcing::gaussian(double epsilon, double period, double modulation) {
  if (!(period >= 0.0) || !std::isfinite(epsilon)) throw InvalidArgument("invalid gaussian forcing parameters");
  Forcing f;
  f.period = period;
  f.label = "gaussian";
  const double w = period > 0.0 ? 2.0 * std::numbers::pi / period : 0.0;
  auto amp = [=](double t) { return period > 0.0 ? epsilon * (1.0 + modulation * std::cos(w * t)) : epsilon; };
  f.value = [=](double t, const Vec3& x) { return amp(t) * std::exp(-norm2(x)); };
  f.gradient = [=](double t, const Vec3& x) { return x * (-2.0 * amp(t) * std::exp(-norm2(x))); };
  f.time_derivative = [=](double t, const Vec3& x) {
    return period > 0.0 ? -epsilon * modulation * w * std::sin(w * t) * std::exp(-norm2(x)) : 0.0;
  };
  return f;
}

namespace {
// U must be strictly positive on shells of radius 2^-4 .. 2^4 at 64 phases.
void validate_positive_forcing(const Forcing& U) {
  const double period = U.period > 0.0 ? U.period : 1.0;
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> gauss;
  for (int it = 0; it < 64; ++it) {
    const double t = period * it / 64.0;
    for (int j = -4; j <= 4; ++j) {
      for (int d = 0; d < 16; ++d) {
        Vec3 dir{gauss(rng), gauss(rng), gauss(rng)};
        const Vec3 x = dir * (std::ldexp(1.0, j) / norm(dir));
        if (!(U.value(t, x) > 0.0)) {
          throw ValidationFailure("forcing U is not positive at t = " + std::to_string(t) +
                                  ", |x| = " + std::to_string(norm(x)));
        }
      }
    }
  }
}
}  // namespace

KeplerModel::KeplerModel(double alpha, Forcing forcing, PhysicalConstants constants, Options opts)
    : ElectromagneticModel(constants,
                           {SourceTrajectory::fixed({}, forcing.period > 0.0 ? forcing.period : 1.0, constants.c)},
                           1e-9),
      alpha_(alpha),
      forcing_(std::move(forcing)) {
  if (!(std::isfinite(alpha_) && alpha_ > 0.0)) throw InvalidArgument("kepler alpha must be positive");
  if (!forcing_.value || !forcing_.gradient) throw InvalidArgument("kepler forcing needs value and gradient");
  if (!forcing_.time_derivative) forcing_.time_derivative = [](double, const Vec3&) { return 0.0; };
  if (opts.strict) validate_positive_forcing(forcing_);
}

// q V = -alpha / |x| - U, so that q E = -alpha x / |x|^3 + grad U.
FieldValues KeplerModel::evaluate(double t, const Vec3& x) const {
  const double r = norm(x);
  if (r < collision_floor()) throw CollisionProximity("kepler singularity reached", t, r);
  const double q = constants().q;
  FieldValues out;
  out.V = (-alpha_ / r - forcing_.value(t, x)) / q;
  out.E = (x * (-alpha_ / (r * r * r)) + forcing_.gradient(t, x)) / q;
  return out;
}

PotentialDerivatives KeplerModel::potential_derivatives(double t, const Vec3& x) const {
  const double r = norm(x);
  if (r < collision_floor()) throw CollisionProximity("kepler singularity reached", t, r);
  const double q = constants().q;
  PotentialDerivatives d;
  d.grad_V = (x * (alpha_ / (r * r * r)) - forcing_.gradient(t, x)) / q;
  d.dV_dt = -forcing_.time_derivative(t, x) / q;
  return d;
}

std::shared_ptr<const KeplerModel> kepler_model(double alpha, Forcing forcing, PhysicalConstants constants,
                                                bool strict) {
  return std::make_shared<const KeplerModel>(alpha, std::move(forcing), constants, KeplerModel::Options{strict});
}

// ---------------------------------------------------------------------------

AnalyticModel::AnalyticModel(AnalyticFieldSpec spec, PhysicalConstants constants)
    : ElectromagneticModel(constants, spec.singular, 1e-9), spec_(std::move(spec)) {
  if (!spec_.V || !spec_.A || !spec_.E || !spec_.B) throw InvalidArgument("analytic model needs V, A, E and B");
  if (!spec_.autonomous && !(spec_.period > 0.0)) throw InvalidArgument("time-dependent model needs a period");

  std::mt19937_64 rng(0xa11ce);
  std::uniform_real_distribution<double> box(-2.0, 2.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double tspan = spec_.autonomous ? 1.0 : spec_.period;
  int accepted = 0;
  for (int attempt = 0; accepted < 20 && attempt < 2000; ++attempt) {
    const double t = tspan * unit(rng);
    const Vec3 x{box(rng), box(rng), box(rng)};
    if (distance_to_singularities(t, x) < 0.1) continue;
    ++accepted;
    const auto d = ElectromagneticModel::potential_derivatives(t, x);
    Vec3 dA_dt = d.dA_dt;
    if (spec_.autonomous) dA_dt = {};
    const Vec3 E_fd = -d.grad_V - dA_dt;
    const Vec3 B_fd = d.jac_A.curl();
    const Vec3 E = spec_.E(t, x);
    const Vec3 B = spec_.B(t, x);
    if (norm(E - E_fd) > 1e-5 * std::max(1.0, norm(E)) || norm(B - B_fd) > 1e-5 * std::max(1.0, norm(B))) {
      throw ValidationFailure("model '" + spec_.name + "': E, B inconsistent with V, A at t = " + std::to_string(t));
    }
  }
}

FieldValues AnalyticModel::evaluate(double t, const Vec3& x) const {
  const double dist = distance_to_singularities(t, x);
  if (dist < collision_floor()) throw CollisionProximity("analytic model singularity reached", t, dist);
  return {spec_.V(t, x), spec_.A(t, x), spec_.E(t, x), spec_.B(t, x)};
}

ModelPtr zero_field_model(PhysicalConstants constants) {
  AnalyticFieldSpec s;
  s.name = "builtin:zero";
  s.V = [](double, const Vec3&) { return 0.0; };
  s.A = [](double, const Vec3&) { return Vec3{}; };
  s.E = s.A;
  s.B = s.A;
  s.zero_vector_potential = true;
  return std::make_shared<const AnalyticModel>(std::move(s), constants);
}

ModelPtr uniform_magnetic_model(Vec3 b0, PhysicalConstants constants) {
  AnalyticFieldSpec s;
  s.name = "builtin:uniform-magnetic";
  s.V = [](double, const Vec3&) { return 0.0; };
  s.A = [b0](double, const Vec3& x) { return cross(b0, x) * 0.5; };
  s.E = [](double, const Vec3&) { return Vec3{}; };
  s.B = [b0](double, const Vec3&) { return b0; };
  return std::make_shared<const AnalyticModel>(std::move(s), constants);
}

ModelPtr uniform_electric_model(Vec3 e0, PhysicalConstants constants) {
  AnalyticFieldSpec s;
  s.name = "builtin:uniform-electric";
  s.V = [e0](double, const Vec3& x) { return -dot(e0, x); };
  s.A = [](double, const Vec3&) { return Vec3{}; };
  s.E = [e0](double, const Vec3&) { return e0; };
  s.B = s.A;
  s.zero_vector_potential = true;
  return std::make_shared<const AnalyticModel>(std::move(s), constants);
}

}  // namespace lorentz_orbits
