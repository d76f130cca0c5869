// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "lorentz_orbits/assumptions.hpp"
#include "lorentz_orbits/scenario.hpp"

using namespace lorentz_orbits;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const std::string kConfigs = LORENTZ_ORBITS_CONFIGS;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [violated: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& title, double budget_s, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail << " [exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > budget_s) {
    out.pass = false;
    out.detail << " [runtime over budget " << budget_s << " s]";
  }
  if (!out.pass) ++failures;
  std::printf("%s criterion %2d  %s:%s (%.2f s)\n", out.pass ? "PASS" : "FAIL", id, title.c_str(),
              out.detail.str().c_str(), secs);
  std::fflush(stdout);
}

PhysicalConstants units(double c) {
  PhysicalConstants k;
  k.c = c;
  return k;
}

std::shared_ptr<LienardWiechertModel> circling_lw(double c, double charge) {
  return std::make_shared<LienardWiechertModel>(
      SourceEnsemble({{SourceTrajectory::circle({}, 1.0, kTwoPi, c), charge}}), units(c));
}

PeriodicPath circle_path(double radius, double period, std::size_t n) {
  std::vector<Vec3> x(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double th = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
    x[j] = {radius * std::cos(th), radius * std::sin(th), 0.0};
  }
  return PeriodicPath(period, std::move(x));
}

ProbeSpec quick_probe() {
  ProbeSpec s;
  s.threads = 4;
  return s;
}

}  // namespace

int main() {
  criterion(1, "Coulomb degeneration of a static LW source", 1.0, [](Outcome& o) {
    const Vec3 r0{0.25, -0.5, 0.125};
    LienardWiechertModel model(SourceEnsemble({{SourceTrajectory::fixed(r0, 1.0, 1.0), -1.5}}), PhysicalConstants{});
    std::mt19937_64 rng(20261016);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    double err_v = 0.0, err_e = 0.0, max_b = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Vec3 x{u(rng), u(rng), u(rng)};
      const double t = u(rng);
      const auto f = model.evaluate(t, x);
      const Vec3 d = x - r0;
      const double r = norm(d);
      const double v = -1.5 / r;
      const Vec3 e = d * (-1.5 / (r * r * r));
      err_v = std::max(err_v, std::abs(f.V - v) / std::abs(v));
      err_e = std::max(err_e, norm(f.E - e) / norm(e));
      max_b = std::max({max_b, norm(f.B), norm(f.A)});
    }
    o.detail << " max rel err V " << err_v << ", E " << err_e << ", max |B|,|A| " << max_b;
    o.require(err_v <= 1e-12, "V rel err <= 1e-12");
    o.require(err_e <= 1e-12, "E rel err <= 1e-12");
    o.require(max_b == 0.0, "B == 0 exactly");
  });

  criterion(2, "retarded time solver", 1.0, [](Outcome& o) {
    // uniform motion r(s) = (v s, 0, 0): quadratic (c^2 - v^2) s^2 + 2 (v x - c^2 t) s + c^2 t^2 - x^2 = 0
    const double c = 1.0, v = 0.5, t = 0.0, x0 = 1.0;
    auto line = [&](double s) { return Vec3{v * s, 0.0, 0.0}; };
    const auto lin = solve_retarded_time(line, t, {x0, 0, 0}, c, v / c, 1e-14, 1.0, 0.0);
    const double a = c * c - v * v, b = 2.0 * (v * x0 - c * c * t), cc = c * c * t * t - x0 * x0;
    const double root = (-b - std::sqrt(b * b - 4.0 * a * cc)) / (2.0 * a);
    const double lin_err = std::abs(lin.t_ret - root);

    const double T = kTwoPi;
    SourceTrajectory s(T, {0.1, 0, 0}, {Harmonic{{1.0, 0, 0.2}, {0, 1.0, 0}}, Harmonic{{0, 0.3, 0}, {}}}, 5.0);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> ut(-10.0, 10.0), ux(-4.0, 4.0);
    double worst_ratio = 0.0, worst_shift = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double tt = ut(rng);
      const Vec3 x{ux(rng), ux(rng), ux(rng)};
      const auto r = retarded_time(s, tt, x);
      worst_ratio = std::max(worst_ratio, r.max_step_ratio);
      worst_shift = std::max(worst_shift, std::abs(retarded_time(s, tt + T, x).t_ret - (r.t_ret + T)));
    }
    o.detail << " linear-motion err " << lin_err << " (t_r = " << lin.t_ret << "), max contraction ratio "
             << worst_ratio << " vs beta_max " << s.beta_max() << ", shift err/T " << worst_shift / T;
    o.require(lin_err <= 1e-10, "quadratic oracle <= 1e-10");
    o.require(worst_ratio <= s.beta_max() + 1e-6, "ratio <= beta_max + 1e-6");
    o.require(worst_shift <= 2e-12 * T, "shift-periodicity <= 2e-12 T");
  });

  criterion(3, "doppler factor and retarded distance bounds, (AV1)", 5.0, [](Outcome& o) {
    const auto cfg = load_config(kConfigs + "/lw_single.json", {}, 4);
    const auto& lw = dynamic_cast<const LienardWiechertModel&>(*cfg.model);
    const auto& src = lw.ensemble().sources()[0];
    const double bmax = src.trajectory.beta_max();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ut(0.0, 20.0), ux(-3.0, 3.0);
    double min_doppler_margin = 1e300, min_dist_margin = 1e300;
    for (int i = 0; i < 1000; ++i) {
      const double t = ut(rng);
      const Vec3 x{ux(rng), ux(rng), ux(rng)};
      const auto f = lw_frame(src, t, x, cfg.constants);
      min_doppler_margin = std::min(min_doppler_margin, f.doppler - (1.0 - bmax));
      min_dist_margin = std::min(min_dist_margin, norm(x - src.trajectory.position(t)) / (1.0 - bmax) - f.dist);
    }
    const auto report = check_assumptions(*cfg.model, cfg.assumptions);
    o.detail << " min(doppler - (1 - beta_max)) " << min_doppler_margin << ", min distance-bound slack "
             << min_dist_margin << ", kappa' " << report.vector_potential.kappa_prime << " vs beta_max " << bmax;
    o.require(min_doppler_margin >= 0.0, "doppler >= 1 - beta_max");
    o.require(min_dist_margin >= -1e-12, "dist <= |x - r(t)| / (1 - beta_max)");
    o.require(report.vector_potential.pass, "(AV1) passes");
    o.require(report.vector_potential.kappa_prime <= bmax + 1e-9, "kappa' <= beta_max + 1e-9");
  });

  criterion(4, "RK4 order, energy drift, subluminal states", 10.0, [](Outcome& o) {
    const auto k = units(10.0);
    auto kep = kepler_model(1.0, Forcing::none(), k);
    const double T = kTwoPi;
    const auto orb = kepler_circular_orbit(1.0, 1, T, k);
    auto err = [&](int steps) { return norm(flow(*kep, orb.state0, T, steps).x - orb.state0.x); };
    const double e1 = err(250), e2 = err(500), e3 = err(1000);
    const double order1 = std::log2(e1 / e2), order2 = std::log2(e2 / e3);
    const auto traj = integrate(*kep, orb.state0, T, 10000);
    const double h0 = energy(*kep, orb.state0);
    double drift = 0.0;
    bool subluminal = true;
    for (const auto& s : traj.states) {
      drift = std::max(drift, std::abs(energy(*kep, s) - h0) / std::abs(h0));
      subluminal = subluminal && norm(velocity_from_momentum(s.p, k)) < k.c;
    }
    o.detail << " observed orders " << order1 << ", " << order2 << ", energy drift " << drift
             << " per period at h = T/1e4";
    o.require(order1 >= 3.7 && order1 <= 4.3 && order2 >= 3.7 && order2 <= 4.3, "order in [3.7, 4.3]");
    o.require(drift <= 1e-8, "drift <= 1e-8");
    o.require(subluminal, "|v| < c at every step");
  });

  criterion(5, "Newtonian limit of the circular orbit", 1.0, [](Outcome& o) {
    const auto orb = kepler_circular_orbit(1.0, 1, kTwoPi, units(1e6));
    const double kepler_rho = std::cbrt(1.0 * std::pow(kTwoPi / kTwoPi, 2));
    const double rel = std::abs(orb.radius - kepler_rho) / kepler_rho;
    o.detail << " rho " << orb.radius << ", rel err vs third law " << rel;
    o.require(rel <= 1e-6, "rel err <= 1e-6");
  });

  criterion(6, "action value, gradient, EL residual", 30.0, [](Outcome& o) {
    auto lw = circling_lw(10.0, -1.0);
    std::mt19937_64 rng(6);
    std::normal_distribution<double> g(0.0, 0.15);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t n = 16;
      std::vector<Vec3> x(n);
      Vec3 a[3], b[3];
      for (int j = 0; j < 3; ++j) {
        a[j] = {g(rng), g(rng), g(rng)};
        b[j] = {g(rng), g(rng), g(rng)};
      }
      for (std::size_t kk = 0; kk < n; ++kk) {
        const double th = kTwoPi * kk / n;
        x[kk] = {2.0 * std::cos(th), 2.0 * std::sin(th), 0.6};
        for (int j = 0; j < 3; ++j) x[kk] += a[j] * std::cos((j + 1) * th) + b[j] * std::sin((j + 1) * th);
      }
      const PeriodicPath path(kTwoPi, x);
      if (!eval_action(*lw, path).feasible) throw std::runtime_error("random path not feasible");
      const auto grad = action_gradient(*lw, path);
      double dev = 0.0, scale = 0.0;
      for (std::size_t kk = 0; kk < n; ++kk) {
        for (int c = 0; c < 3; ++c) {
          auto up = x, dn = x;
          up[kk][c] += 1e-6;
          dn[kk][c] -= 1e-6;
          const double fd = (eval_action(*lw, PeriodicPath(kTwoPi, up)).total -
                             eval_action(*lw, PeriodicPath(kTwoPi, dn)).total) / 2e-6;
          dev = std::max(dev, std::abs(fd - grad[kk][c]));
          scale = std::max(scale, std::abs(grad[kk][c]));
        }
      }
      worst = std::max(worst, dev / scale);
    }
    auto zero = zero_field_model(units(10.0));
    const double psi = eval_action(*zero, circle_path(1.0, kTwoPi, 64)).psi;
    const double psi_exact = kTwoPi * 100.0 * (1.0 - std::sqrt(0.99));
    const double psi_err = std::abs(psi - psi_exact) / psi_exact;
    const auto k = units(10.0);
    auto kep = kepler_model(1.0, Forcing::none(), k);
    const auto orb = kepler_circular_orbit(1.0, 1, kTwoPi, k);
    const double res = el_residual(*kep, circle_path(orb.radius, kTwoPi, 256)).norm;
    o.detail << " gradient vs FD max rel dev " << worst << ", psi rel err " << psi_err
             << ", circular-orbit residual " << res;
    o.require(worst <= 1e-5, "gradient rel dev <= 1e-5");
    o.require(psi_err <= 1e-10, "psi closed form <= 1e-10");
    o.require(res <= 1e-8, "EL residual <= 1e-8");
  });

  criterion(7, "action blow-up along loops shrinking onto a source", 5.0, [](Outcome& o) {
    auto lw = circling_lw(10.0, -1.0);
    const auto& r1 = lw->ensemble().sources()[0].trajectory;
    double first = 0.0, prev = 0.0, last = 0.0;
    bool monotone = true, sentinel_hit = false, exceeded_before_sentinel = false;
    int last_j = 0;
    for (int j = 0; j <= 12; ++j) {
      const double lam = std::ldexp(1.0, -j);
      std::vector<Vec3> x(128);
      for (std::size_t n = 0; n < x.size(); ++n) {
        const double t = kTwoPi * n / x.size();
        x[n] = r1.position(t) + Vec3{lam * std::cos(t), 0.0, lam * std::sin(t)};
      }
      const auto ev = eval_action(*lw, PeriodicPath(kTwoPi, x));
      if (!ev.feasible) {
        sentinel_hit = true;
        break;
      }
      if (j == 0) first = ev.total;
      if (j >= 3 && !(ev.total > prev)) monotone = false;
      if (ev.total > 1e3 * first) exceeded_before_sentinel = true;
      prev = last = ev.total;
      last_j = j;
    }
    o.detail << " I(lambda=1) " << first << ", I(lambda=2^-" << last_j << ") " << last << ", ratio "
             << last / first << (sentinel_hit ? ", sentinel reached" : "");
    o.require(monotone, "monotone for j >= 3");
    o.require(exceeded_before_sentinel, "exceeds 1e3 x I(lambda=1) before the sentinel");
  });

  ScanResult kepler_scan, forced_scan, lw_scan;
  ScenarioConfig kepler_cfg, forced_cfg, lw_cfg;
  criterion(8, "multiplicity scans", 300.0, [&](Outcome& o) {
    kepler_cfg = load_config(kConfigs + "/kepler_circular.json", {}, 4);
    forced_cfg = load_config(kConfigs + "/forced_kepler.json", {}, 4);
    lw_cfg = load_config(kConfigs + "/lw_single.json", {}, 4);
    auto scan = [](const ScenarioConfig& c) {
      return multiplicity_scan(*c.model, c.orbits->period, c.orbits->seeds, c.orbits->scan);
    };
    kepler_scan = scan(kepler_cfg);
    forced_scan = scan(forced_cfg);
    lw_scan = scan(lw_cfg);

    const auto& ko = kepler_scan.orbits;
    const double tol = kepler_cfg.orbits->scan.collocation.tol;
    // radius of each orbit, ordered by the winding of its seed
    std::vector<std::pair<int, double>> radii;
    double worst_res = 0.0, worst_closure = 0.0, min_pair = 1e300;
    for (const auto& r : ko) {
      const auto at = r.seed_id.find("_k");
      const int w = std::stoi(r.seed_id.substr(at + 2));
      double rad = 0.0;
      for (const auto& x : r.path.nodes()) rad += norm(x);
      radii.emplace_back(w, rad / static_cast<double>(r.path.size()));
      worst_res = std::max(worst_res, r.residual_norm);
      worst_closure = std::max(worst_closure, r.closure_error);
    }
    for (std::size_t i = 0; i < ko.size(); ++i) {
      for (std::size_t j = i + 1; j < ko.size(); ++j) {
        const double tol_d = kepler_cfg.orbits->scan.dedup_rel * std::max(path_diameter(ko[i].path), path_diameter(ko[j].path));
        min_pair = std::min(min_pair, path_distance(ko[i].path, ko[j].path) / tol_d);
      }
    }
    std::sort(radii.begin(), radii.end());
    bool decreasing = radii.size() == 5;
    for (std::size_t i = 1; i < radii.size(); ++i) decreasing = decreasing && radii[i].second < radii[i - 1].second;

    auto best_res = [](const ScanResult& s) {
      double m = 1e300;
      for (const auto& r : s.orbits) m = std::min(m, r.residual_norm);
      return m;
    };
    const double forced_res = best_res(forced_scan), lw_res = best_res(lw_scan);
    o.detail << " kepler " << ko.size() << " orbits (min pair distance / dedup tol " << min_pair
             << ", max residual " << worst_res << ", max closure " << worst_closure << "); forced "
             << forced_scan.orbits.size() << " orbits (best residual " << forced_res << ", fixture "
             << fixtures::kForcedKeplerResidual << "); LW " << lw_scan.orbits.size() << " orbits (best residual "
             << lw_res << ", fixture " << fixtures::kLwSingleResidual << ")";
    o.require(ko.size() == 5, "5 Kepler orbits");
    o.require(min_pair > 1.0, "pairwise distance > dedup tol");
    o.require(decreasing, "radii strictly decreasing in k");
    o.require(worst_res <= 1e-8 && worst_res <= tol, "residual <= 1e-8");
    o.require(worst_closure <= 1e-6, "closure <= 1e-6");
    o.require(forced_scan.orbits.size() >= 3, ">= 3 forced orbits");
    o.require(lw_scan.orbits.size() >= 1, ">= 1 LW orbit");
    o.require(forced_scan.orbits.size() >= fixtures::kForcedKeplerOrbits, "forced orbit count fixture");
    o.require(lw_scan.orbits.size() >= fixtures::kLwSingleOrbits, "LW orbit count fixture");
    o.require(forced_res <= fixtures::kRegressionFactor * fixtures::kForcedKeplerResidual, "forced residual fixture");
    o.require(lw_res <= fixtures::kRegressionFactor * fixtures::kLwSingleResidual, "LW residual fixture");
  });

  criterion(9, "cross-solver agreement", 60.0, [&](Outcome& o) {
    int colloc = 0, shoot = 0;
    double worst_closure_ratio = 0.0, worst_residual_ratio = 0.0;
    for (const auto* pair : {&kepler_scan, &forced_scan, &lw_scan}) {
      const auto& cfg = pair == &kepler_scan ? kepler_cfg : pair == &forced_scan ? forced_cfg : lw_cfg;
      const auto& model = *cfg.model;
      const double T = cfg.orbits->period;
      const auto& opts = cfg.orbits->scan;
      for (const auto& r : pair->orbits) {
        if (r.method == OrbitMethod::collocation) {
          ++colloc;
          const double cl = closure_error(model, initial_state_of(model, r.path), T, 10000);
          worst_closure_ratio = std::max(worst_closure_ratio, cl / opts.collocation.tol);
        } else {
          ++shoot;
          const double res = el_residual(model, r.path).norm;
          worst_residual_ratio = std::max(worst_residual_ratio, res / opts.shooting.tol);
        }
      }
    }
    o.detail << " " << colloc << " collocation orbits, max closure/tol_colloc " << worst_closure_ratio << "; "
             << shoot << " shooting orbits, max residual/tol_shoot " << worst_residual_ratio;
    o.require(colloc + shoot > 0, "at least one orbit");
    o.require(worst_closure_ratio <= 100.0, "closure <= 100 tol_colloc");
    o.require(worst_residual_ratio <= 100.0, "residual <= 100 tol_shoot");
  });

  criterion(10, "assumption checker", 30.0, [](Outcome& o) {
    const auto good = load_config(kConfigs + "/lw_two_charges.json", {}, 4);
    const auto rg = check_assumptions(*good.model, good.assumptions);
    const auto bad = load_config(kConfigs + "/lw_flipped_charge.json", {}, 4);
    const auto rb = check_assumptions(*bad.model, bad.assumptions);
    const auto& lw_bad = dynamic_cast<const LienardWiechertModel&>(*bad.model);
    int flipped = -1;
    for (std::size_t i = 0; i < lw_bad.ensemble().size(); ++i) {
      if (lw_bad.ensemble().sources()[i].charge > 0.0) flipped = static_cast<int>(i);
    }
    const auto forced = load_config(kConfigs + "/forced_kepler.json", {}, 4);
    const auto rk = check_assumptions(*forced.model, forced.assumptions);
    auto positive = kepler_model(1.0, Forcing::gaussian(1e-3, kTwoPi, 0.5), PhysicalConstants{}, true);
    const auto rp = check_assumptions(*positive, quick_probe());
    o.detail << " all-negative LW: V " << rg.singular.pass << " AV1 " << rg.vector_potential.pass << " AV2 "
             << rg.decay.pass << "; flipped: V " << rb.singular.pass << ", witness source "
             << rb.singular.witness.source << " at distance " << rb.singular.witness.distance_to_source
             << " (delta " << rb.singular.delta << "); Kepler: pass " << rk.all_pass() << "/" << rp.all_pass()
             << ", A trivial " << rk.vector_potential.trivial << "/" << rp.vector_potential.trivial;
    o.require(rg.all_pass(), "negative LW passes");
    o.require(!rb.singular.pass, "(V) fails when a charge is flipped");
    o.require(rb.singular.witness.source == flipped, "witness at the flipped source");
    o.require(rb.singular.witness.distance_to_source <= rb.singular.delta, "witness within delta");
    o.require(rk.all_pass() && rp.all_pass(), "Kepler with U > 0 passes");
    o.require(rk.vector_potential.trivial && rp.vector_potential.trivial, "A checks trivial");
  });

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
