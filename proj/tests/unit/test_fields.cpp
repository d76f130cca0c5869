#include <random>

#include "doctest.h"
#include "helpers.hpp"

using namespace lorentz_orbits;
using test::kTwoPi;

namespace {

// Central differences of V and A, for the E = -grad V - dA/dt, B = curl A oracle.
struct FdPotentials {
  Vec3 grad_V;
  Mat3 jac_A;
  Vec3 dA_dt;
};

FdPotentials fd_potentials(const ElectromagneticModel& m, double t, const Vec3& x, double h) {
  FdPotentials out;
  for (int b = 0; b < 3; ++b) {
    Vec3 xp = x, xm = x;
    xp[b] += h;
    xm[b] -= h;
    const auto fp = m.evaluate(t, xp), fm = m.evaluate(t, xm);
    out.grad_V[b] = (fp.V - fm.V) / (2 * h);
    for (int a = 0; a < 3; ++a) out.jac_A.row[a][b] = (fp.A[a] - fm.A[a]) / (2 * h);
  }
  const auto fp = m.evaluate(t + h, x), fm = m.evaluate(t - h, x);
  out.dA_dt = (fp.A - fm.A) / (2 * h);
  return out;
}

}  // namespace

TEST_CASE("static source frame and Coulomb limit") {
  const ChargeSource src{SourceTrajectory::fixed({}, 1.0, 1.0), -1.0};
  const PhysicalConstants k;
  const auto f = lw_frame(src, 0.0, {2, 0, 0}, k);
  CHECK(norm(f.eta - Vec3{1, 0, 0}) == 0.0);
  CHECK(norm(f.beta) == 0.0);
  CHECK(f.dist == 2.0);
  CHECK(f.doppler == 1.0);
  const auto p = lw_potentials(src, f, k);
  CHECK(p.V == -0.5);
  CHECK(norm(p.A) == 0.0);
  const auto e = lw_fields(src, f, k);
  CHECK(norm(e.E - Vec3{-0.25, 0, 0}) < 1e-16);
  CHECK(norm(e.B) == 0.0);
}

TEST_CASE("Coulomb degeneration at random probes") {
  const Vec3 r0{0.3, -0.2, 0.5};
  auto model = test::lw_model({{SourceTrajectory::fixed(r0, 1.0, 1.0), -2.0}}, 1.0);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const Vec3 x = test::random_vec(rng, -5, 5);
    const double t = std::uniform_real_distribution<double>(-3, 3)(rng);
    const auto f = model->evaluate(t, x);
    const Vec3 d = x - r0;
    const double r = norm(d);
    CHECK(test::rel_err(f.V, -2.0 / r) <= 1e-12);
    CHECK(norm(f.E - d * (-2.0 / (r * r * r))) <= 1e-12 * 2.0 / (r * r));
    CHECK(norm(f.B) == 0.0);
    CHECK(norm(f.A) == 0.0);
  }
}

TEST_CASE("circular source frame bounds") {
  const double c = 10.0;
  const auto src = test::circling_charge(1.0, kTwoPi, c, -1.0);
  const auto k = test::units(c);
  const auto f = lw_frame(src, 0.0, {5, 0, 0}, k);
  CHECK(f.doppler >= 0.9);
  CHECK(f.doppler <= 1.1);
  std::mt19937_64 rng(5);
  const double bmax = src.trajectory.beta_max();
  for (int i = 0; i < 100; ++i) {
    const Vec3 x = test::random_vec(rng, -3, 3);
    const double t = std::uniform_real_distribution<double>(0, 10)(rng);
    const auto fr = lw_frame(src, t, x, k);
    CHECK(std::abs(norm(fr.eta) - 1.0) <= 1e-12);
    CHECK(std::abs(c * (t - fr.t_ret) - fr.dist) <= 1e-10);
    CHECK(fr.doppler >= 1.0 - bmax);
    CHECK(fr.dist <= norm(x - src.trajectory.position(t)) / (1.0 - bmax) + 1e-12);
    const auto p = lw_potentials(src, fr, k);
    CHECK(p.V < 0.0);
    CHECK(norm(p.A) <= bmax / c * std::abs(p.V) * (1 + 1e-12));
    const auto e = lw_fields(src, fr, k);
    const double scale = norm(e.E) * norm(e.B) + 1e-300;
    CHECK(std::abs(dot(e.B, e.E)) <= 1e-12 * scale);
    CHECK(std::abs(dot(e.B, fr.eta)) <= 1e-12 * norm(e.B) + 1e-300);
  }
}

TEST_CASE("velocity field term for uniform motion") {
  // Frame of r(t) = (v t, 0, 0) built directly; beta_dot = 0 leaves only the first term.
  const double c = 1.0, v = 0.6;
  const ChargeSource dummy{SourceTrajectory::fixed({}, 1.0, c), -1.0};
  const auto k = test::units(c);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 20; ++i) {
    const Vec3 x = test::random_vec(rng, -3, 3);
    const double t = 0.5;
    auto pos = [&](double s) { return Vec3{v * s, 0, 0}; };
    const auto r = solve_retarded_time(pos, t, x, c, v, 1e-15, 1.0, 0.0);
    RetardedFrame f;
    f.t_ret = r.t_ret;
    f.r_ret = pos(r.t_ret);
    f.rdot_ret = {v, 0, 0};
    f.dist = norm(x - f.r_ret);
    f.eta = (x - f.r_ret) / f.dist;
    f.beta = f.rdot_ret / c;
    f.doppler = 1.0 - dot(f.eta, f.beta);
    const auto e = lw_fields(dummy, f, k);
    const double gamma2 = 1.0 / (1.0 - v * v);
    const double lhs = norm(e.E) * f.dist * f.dist * std::pow(f.doppler, 3) * gamma2;
    CHECK(std::abs(lhs - norm(f.eta - f.beta)) <= 1e-10);
  }
}

TEST_CASE("LW fields agree with potentials: E = -grad V - dA/dt, B = curl A") {
  const double c = 3.0;
  SourceTrajectory traj(kTwoPi, {0.1, 0, 0}, {Harmonic{{1, 0, 0.2}, {0, 1, 0}}, Harmonic{{0, 0.3, 0}, {0.1, 0, 0}}}, c);
  auto model = test::lw_model({{traj, -1.5}}, c);
  std::mt19937_64 rng(17);
  for (int i = 0; i < 30; ++i) {
    const Vec3 x = test::random_vec(rng, -4, 4);
    if (model->distance_to_singularities(0.0, x) < 0.5) continue;
    const double t = std::uniform_real_distribution<double>(0, kTwoPi)(rng);
    const auto f = model->evaluate(t, x);
    const auto d = model->potential_derivatives(t, x);
    const auto fd = fd_potentials(*model, t, x, 1e-5);
    const double sv = norm(d.grad_V) + 1e-12;
    CHECK(norm(d.grad_V - fd.grad_V) <= 1e-6 * sv);
    CHECK(norm(d.dA_dt - fd.dA_dt) <= 1e-6 * (norm(d.dA_dt) + 1e-9));
    for (int a = 0; a < 3; ++a) CHECK(norm(d.jac_A.row[a] - fd.jac_A.row[a]) <= 1e-6 * (norm(d.jac_A.row[a]) + 1e-9));
    CHECK(norm(f.E - (-d.grad_V - d.dA_dt)) <= 1e-10 * norm(f.E));
    CHECK(norm(f.B - d.jac_A.curl()) <= 1e-10 * (norm(f.B) + 1e-12));
  }
}

TEST_CASE("ensemble superposition") {
  const double T = kTwoPi;
  auto two = test::lw_model({{SourceTrajectory::fixed({-1, 0, 0}, T, 1.0), -1.0},
                             {SourceTrajectory::fixed({1, 0, 0}, T, 1.0), -1.0}},
                            1.0);
  const auto f = two->evaluate(0.0, {});
  CHECK(f.V == doctest::Approx(-2.0));
  CHECK(norm(f.E) < 1e-15);

  const auto src = test::circling_charge(1.0, T, 10.0, -1.0);
  auto one = test::lw_model({src}, 10.0);
  auto doubled = test::lw_model({{src.trajectory, -2.0}}, 10.0);
  const Vec3 x{0.3, 2.0, -0.4};
  const auto a = one->evaluate(1.1, x), b = doubled->evaluate(1.1, x);
  const auto p = lw_potentials(src, 1.1, x, test::units(10.0));
  const auto e = lw_fields(src, 1.1, x, test::units(10.0));
  CHECK(a.V == p.V);
  CHECK(norm(a.A - p.A) == 0.0);
  CHECK(norm(a.E - e.E) == 0.0);
  CHECK(norm(a.B - e.B) == 0.0);
  CHECK(b.V == doctest::Approx(2.0 * a.V).epsilon(1e-14));
  CHECK(norm(b.E - a.E * 2.0) <= 1e-14 * norm(a.E));
  CHECK(norm(b.B - a.B * 2.0) <= 1e-14 * norm(a.B));
  CHECK(norm(b.A - a.A * 2.0) <= 1e-14 * norm(a.A));

  // T-periodicity
  const auto c2 = one->evaluate(1.1 + T, x);
  CHECK(test::rel_err(c2.V, a.V) <= 1e-10);
  CHECK(norm(c2.E - a.E) <= 1e-10 * norm(a.E));
}

TEST_CASE("LW model rejects mismatched c and collisions") {
  auto src = test::circling_charge(1.0, kTwoPi, 10.0, -1.0);
  CHECK_THROWS_AS(LienardWiechertModel(SourceEnsemble({src}), test::units(5.0)), InvalidArgument);
  auto model = test::lw_model({{SourceTrajectory::fixed({}, 1.0, 1.0), -1.0}}, 1.0);
  CHECK_THROWS_AS(model->evaluate(0.0, {}), CollisionProximity);
}

TEST_CASE("Kepler model") {
  auto pure = kepler_model(1.0, Forcing::none(), PhysicalConstants{});
  const auto f = pure->evaluate(0.0, {2, 0, 0});
  CHECK(norm(f.E - Vec3{-0.25, 0, 0}) < 1e-16);
  CHECK(norm(f.B) == 0.0);
  CHECK(norm(f.A) == 0.0);
  CHECK(pure->autonomous());

  auto forced = kepler_model(1.0, Forcing::gaussian(0.3, 0.0), PhysicalConstants{});
  std::mt19937_64 rng(23);
  for (int i = 0; i < 50; ++i) {
    const Vec3 x = test::random_vec(rng, -2, 2);
    if (norm(x) < 0.2) continue;
    const auto v = forced->evaluate(0.0, x);
    const double h = 1e-5;
    Vec3 grad;
    for (int a = 0; a < 3; ++a) {
      Vec3 xp = x, xm = x;
      xp[a] += h;
      xm[a] -= h;
      grad[a] = (forced->evaluate(0.0, xp).V - forced->evaluate(0.0, xm).V) / (2 * h);
    }
    CHECK(norm(v.E + grad) <= 1e-6 * std::max(1.0, norm(v.E)));
    CHECK(v.V <= -1.0 / norm(x));
  }
  auto timed = kepler_model(1e-3, Forcing::gaussian(1e-3, kTwoPi), PhysicalConstants{});
  CHECK_FALSE(timed->autonomous());
  CHECK(timed->period() == kTwoPi);
}

TEST_CASE("strict Kepler validation rejects a forcing that vanishes") {
  // 1 + cos(2 pi t / T) = 0 at t = T/2
  CHECK_THROWS_AS(kepler_model(1.0, Forcing::gaussian(1e-3, kTwoPi, 1.0), PhysicalConstants{}, true),
                  ValidationFailure);
  CHECK_NOTHROW(kepler_model(1.0, Forcing::gaussian(1e-3, kTwoPi, 0.5), PhysicalConstants{}, true));
  CHECK_THROWS_AS(kepler_model(1.0, Forcing::none(), PhysicalConstants{}, true), ValidationFailure);
}

TEST_CASE("analytic models and registration probe") {
  auto mag = uniform_magnetic_model({0, 0, 2}, PhysicalConstants{});
  const auto f = mag->evaluate(0.0, {1, 2, 3});
  CHECK(norm(f.B - Vec3{0, 0, 2}) < 1e-15);
  CHECK(norm(f.E) == 0.0);
  const auto d = mag->potential_derivatives(0.0, {1, 2, 3});
  CHECK(norm(d.jac_A.curl() - Vec3{0, 0, 2}) < 1e-8);

  AnalyticFieldSpec bad;
  bad.name = "inconsistent";
  bad.V = [](double, const Vec3& x) { return x.x; };
  bad.A = [](double, const Vec3&) { return Vec3{}; };
  bad.E = [](double, const Vec3&) { return Vec3{1, 0, 0}; };  // should be (-1, 0, 0)
  bad.B = [](double, const Vec3&) { return Vec3{}; };
  CHECK_THROWS_AS(AnalyticModel(bad, PhysicalConstants{}), ValidationFailure);
  bad.E = [](double, const Vec3&) { return Vec3{-1, 0, 0}; };
  CHECK_NOTHROW(AnalyticModel(bad, PhysicalConstants{}));
}
