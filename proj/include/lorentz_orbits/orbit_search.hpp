#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lorentz_orbits/action.hpp"
#include "lorentz_orbits/dynamics.hpp"

namespace lorentz_orbits {

enum class OrbitMethod { shooting, collocation };
const char* to_string(OrbitMethod m);

struct OrbitResult {
  PeriodicPath path;
  double residual_norm = 0.0;
  ActionEvaluation action;
  /// |x(T) - x(0)| + |p(T) - p(0)| after re-integrating from the orbit's initial state.
  double closure_error = 0.0;
  double min_separation = 0.0;
  OrbitMethod method = OrbitMethod::collocation;
  std::string seed_id;
  int iterations = 0;
  bool converged = false;
  ParticleState initial_state;
  std::uint64_t rng_seed = 0;
};

/// Raised when a solver gives up; carries the best iterate when one exists.
class OrbitNotConverged : public NoConvergence {
 public:
  OrbitNotConverged(const std::string& msg, std::optional<OrbitResult> best)
      : NoConvergence(msg), best_(std::move(best)) {}
  const std::optional<OrbitResult>& best() const { return best_; }

 private:
  std::optional<OrbitResult> best_;
};

enum class SeedKind { loop_around_source, kfold_circle, explicit_path, constant };
const char* to_string(SeedKind k);

struct SeedSpec {
  SeedKind kind = SeedKind::kfold_circle;
  std::string id;           ///< empty: derived from the parameters
  int source = 0;           ///< singular trajectory to loop around
  double scale = 1.0;       ///< loop radius lambda
  int winding = 1;          ///< k
  Vec3 normal{0.0, 0.0, 1.0};
  std::size_t nodes = 128;
  double phase = 0.0;       ///< time shift as a fraction of the period
  Vec3 point;               ///< constant seeds
  std::vector<Vec3> path;   ///< explicit seeds
  /// Relative amplitude of a smooth random perturbation (0 = none), drawn from rng_seed.
  double perturbation = 0.0;
  std::uint64_t rng_seed = 0;
};

std::string seed_label(const SeedSpec& spec);

/// Seed paths with period T.
///  - loop_around_source: r_i(t) + lambda (cos(2 pi k t/T) u + sin(2 pi k t/T) w), lambda
///    clamped to (0.9 c - max|r_i'|) T / (2 pi k) so the seed stays at <= 0.9 c;
///  - kfold_circle: the circular Kepler orbit closing k times in T (Kepler models only);
///  - explicit_path / constant: as given.
/// Throws InfeasibleSeed when the result would not be feasible.
PeriodicPath generate_seed(const ElectromagneticModel& model, const SeedSpec& spec, double T);

struct ShootingOptions {
  double tol = 1e-10;
  int max_iterations = 30;
  int steps = 10000;
  double fd_step = 1e-7;
  std::size_t nodes = 128;
  int max_halvings = 30;
  double speed_margin = 0.995;
};

/// Damped Newton on F(x0, p0) = (x(T) - x0, p(T) - p0) with a forward-difference Jacobian.
/// The converged trajectory is resampled on `nodes` points and checked with el_residual.
OrbitResult find_orbit_shooting(const ElectromagneticModel& model, const ParticleState& state0, double T,
                                const ShootingOptions& opts = {});

struct CollocationOptions {
  double tol = 1e-8;
  int max_iterations = 80;
  double lm_initial = 1e-3;
  double lm_factor = 10.0;
  double lm_max = 1e12;
  double fd_step = 1e-7;
  double speed_margin = 0.995;
  int max_halvings = 30;
  /// RK4 steps for the closure re-check of a converged path.
  int verify_steps = 10000;
  /// Extra updates after tol is met, while the residual exceeds polish_factor * tol
  /// and each update cuts it at least in half.
  int polish_iterations = 5;
  double polish_factor = 1e-3;
};

/// Levenberg-Marquardt on |el_residual|^2 over the 3N node coordinates.
OrbitResult find_orbit_collocation(const ElectromagneticModel& model, const PeriodicPath& seed,
                                   const CollocationOptions& opts = {}, const std::string& seed_id = "explicit");

/// State (x_0, m gamma v_0) of a path at t = 0, velocity from spectral differentiation.
ParticleState initial_state_of(const ElectromagneticModel& model, const PeriodicPath& path);

/// |x(T) - x0| + |p(T) - p0| for one RK4 pass; +inf if the integration collides.
double closure_error(const ElectromagneticModel& model, const ParticleState& s0, double T, int steps);

/// min over cyclic shifts s of max_k |a_k - b_{k+s}|; +inf for different node counts.
double path_distance(const PeriodicPath& a, const PeriodicPath& b);
/// Diagonal of the path's bounding box.
double path_diameter(const PeriodicPath& p);

struct ScanOptions {
  CollocationOptions collocation;
  ShootingOptions shooting;
  double dedup_rel = 1e-4;
  int threads = 1;
  bool shooting_fallback = true;
};

struct SeedFailure {
  std::string seed_id;
  std::string kind;
  std::string message;
};

struct ScanResult {
  /// Distinct converged orbits sorted by action, then lexicographically by path.
  std::vector<OrbitResult> orbits;
  std::vector<SeedFailure> failures;
  /// Converged results merged into an earlier orbit by deduplication.
  std::size_t duplicates = 0;
};

ScanResult multiplicity_scan(const ElectromagneticModel& model, double T, const std::vector<SeedSpec>& seeds,
                             const ScanOptions& opts = {});

}  // namespace lorentz_orbits
