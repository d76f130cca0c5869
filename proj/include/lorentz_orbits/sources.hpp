#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lorentz_orbits/core.hpp"
#include "lorentz_orbits/errors.hpp"

namespace lorentz_orbits {

/// One harmonic of a source trajectory: contributes cos_coeff * cos(j w t) + sin_coeff * sin(j w t).
struct Harmonic {
  Vec3 cos_coeff;
  Vec3 sin_coeff;
};

struct Kinematics {
  Vec3 r;
  Vec3 rdot;
  Vec3 rddot;
};

/// T-periodic source path given as a truncated Fourier series,
///   r(t) = mean + sum_j (a_j cos(2 pi j t / T) + b_j sin(2 pi j t / T)),
/// with analytic first and second derivatives. Construction rejects paths whose
/// peak speed is not strictly below c.
class SourceTrajectory {
 public:
  /// Largest admissible beta_max; anything at or above it is treated as superluminal.
  static constexpr double kMaxBeta = 1.0 - 1e-9;

  SourceTrajectory(double period, Vec3 mean, std::vector<Harmonic> harmonics, double c);

  /// Stationary point source.
  static SourceTrajectory fixed(Vec3 position, double period, double c) {
    return SourceTrajectory(period, position, {}, c);
  }
  /// Circle of radius `radius` in the z = `center.z` plane, traversed `winding` times per period.
  static SourceTrajectory circle(Vec3 center, double radius, double period, double c, int winding = 1);

  Kinematics eval(double t) const;
  Vec3 position(double t) const;

  double period() const { return period_; }
  double c() const { return c_; }
  /// max_t |rdot(t)| / c.
  double beta_max() const { return beta_max_; }
  const Vec3& mean() const { return mean_; }
  const std::vector<Harmonic>& harmonics() const { return harmonics_; }
  bool is_static() const { return harmonics_.empty(); }

 private:
  double estimate_beta_max() const;

  double period_;
  Vec3 mean_;
  std::vector<Harmonic> harmonics_;
  double c_;
  double beta_max_ = 0.0;
};

struct RetardedTime {
  double t_ret = 0.0;
  int iterations = 0;
  /// Largest |d_{k+1}| / |d_k| over consecutive fixed-point updates (0 if fewer than two).
  double max_step_ratio = 0.0;
};

struct RetardedTimeOptions {
  /// Absolute tolerance on the fixed-point residual; <= 0 selects 1e-12 * period.
  double tol = 0.0;
  /// Distances |x - r(t_ret)| below this raise CollisionProximity.
  double collision_floor = 0.0;
  /// Optional starting guess; default is t - |x - r(t)| / c.
  std::optional<double> start;
};

/// Fixed-point solve of t_ret = t - |x - position(t_ret)| / c for any path with
/// speed bound beta_bound * c (beta_bound < 1 makes the map a contraction).
template <class PositionFn>
RetardedTime solve_retarded_time(PositionFn&& position, double t, const Vec3& x, double c,
                                 double beta_bound, double tol, double period_scale,
                                 double collision_floor, std::optional<double> start = {}) {
  const double contraction = std::max(beta_bound, 0.0);
  int max_iter = 64;
  if (contraction > 0.0 && contraction < 1.0) {
    max_iter += static_cast<int>(std::ceil(std::log(tol / period_scale) / std::log(contraction)));
  }
  double current = start ? *start : t - norm(x - position(t)) / c;
  RetardedTime out;
  double prev_step = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    const double next = t - norm(x - position(current)) / c;
    const double step = std::abs(next - current);
    // ratios of steps near round-off carry no information about the contraction
    if (prev_step > 0.0 && step > 1e3 * std::numeric_limits<double>::epsilon() * (std::abs(t) + period_scale)) {
      out.max_step_ratio = std::max(out.max_step_ratio, step / prev_step);
    }
    prev_step = step;
    current = next;
    if (step <= tol) {
      out.t_ret = current;
      out.iterations = it;
      const double dist = norm(x - position(current));
      if (dist < collision_floor) {
        throw CollisionProximity("observation point within collision floor of a source", t, dist);
      }
      return out;
    }
  }
  throw MaxIterationsExceeded("retarded time iteration did not converge");
}

RetardedTime retarded_time(const SourceTrajectory& s, double t, const Vec3& x,
                           const RetardedTimeOptions& opts = {});

struct ChargeSource {
  SourceTrajectory trajectory;
  double charge;
};

/// A set of point charges sharing one period. Construction verifies that the
/// trajectories stay pairwise separated over the period.
class SourceEnsemble {
 public:
  static constexpr int kSeparationSamples = 1024;

  explicit SourceEnsemble(std::vector<ChargeSource> sources);

  const std::vector<ChargeSource>& sources() const { return sources_; }
  std::size_t size() const { return sources_.size(); }
  double period() const { return period_; }
  /// Minimum of |r_i(t) - r_j(t)| over sampled t and i != j (+inf for one source).
  double min_separation() const { return min_separation_; }
  /// Diameter of the bounding box swept by all sources.
  double diameter() const { return diameter_; }
  /// max_{i,t} |r_i(t)|.
  double theta() const { return theta_; }
  double beta_max() const;
  /// Distances below this are collisions: 1e-9 * max(diameter, 1).
  double collision_floor() const { return 1e-9 * std::max(diameter_, 1.0); }

 private:
  std::vector<ChargeSource> sources_;
  double period_ = 0.0;
  double min_separation_ = 0.0;
  double diameter_ = 0.0;
  double theta_ = 0.0;
};

}  // namespace lorentz_orbits
