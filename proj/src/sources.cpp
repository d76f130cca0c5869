#include "lorentz_orbits/sources.hpp"

#include <limits>
#include <numbers>

namespace lorentz_orbits {

namespace {
constexpr int kBetaSamples = 4096;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

SourceTrajectory::SourceTrajectory(double period, Vec3 mean, std::vector<Harmonic> harmonics, double c)
    : period_(period), mean_(mean), harmonics_(std::move(harmonics)), c_(c) {
  if (!(std::isfinite(period_) && period_ > 0.0)) throw InvalidArgument("source period must be positive");
  if (!(std::isfinite(c_) && c_ > 0.0)) throw InvalidArgument("speed of light must be positive");
  if (!mean_.finite()) throw InvalidArgument("source mean position is not finite");
  for (const auto& h : harmonics_) {
    if (!h.cos_coeff.finite() || !h.sin_coeff.finite()) throw InvalidArgument("source harmonic is not finite");
  }
  beta_max_ = estimate_beta_max();
  if (!(beta_max_ < kMaxBeta)) {
    throw SuperluminalSource("superluminal source: beta_max = " + std::to_string(beta_max_) + " >= 1");
  }
}

SourceTrajectory SourceTrajectory::circle(Vec3 center, double radius, double period, double c, int winding) {
  std::vector<Harmonic> h(static_cast<std::size_t>(winding));
  h.back() = {{radius, 0.0, 0.0}, {0.0, radius, 0.0}};
  return SourceTrajectory(period, center, std::move(h), c);
}

Kinematics SourceTrajectory::eval(double t) const {
  Kinematics k{mean_, {}, {}};
  const double w = kTwoPi / period_;
  for (std::size_t j = 0; j < harmonics_.size(); ++j) {
    const double wj = w * static_cast<double>(j + 1);
    const double cs = std::cos(wj * t);
    const double sn = std::sin(wj * t);
    const auto& a = harmonics_[j].cos_coeff;
    const auto& b = harmonics_[j].sin_coeff;
    k.r += a * cs + b * sn;
    k.rdot += (b * cs - a * sn) * wj;
    k.rddot -= (a * cs + b * sn) * (wj * wj);
  }
  return k;
}

Vec3 SourceTrajectory::position(double t) const {
  Vec3 r = mean_;
  const double w = kTwoPi / period_;
  for (std::size_t j = 0; j < harmonics_.size(); ++j) {
    const double wj = w * static_cast<double>(j + 1);
    r += harmonics_[j].cos_coeff * std::cos(wj * t) + harmonics_[j].sin_coeff * std::sin(wj * t);
  }
  return r;
}

double SourceTrajectory::estimate_beta_max() const {
  if (harmonics_.empty()) return 0.0;
  auto speed = [this](double t) { return norm(eval(t).rdot); };
  const double dt = period_ / kBetaSamples;
  double best_t = 0.0;
  double best = -1.0;
  for (int i = 0; i < kBetaSamples; ++i) {
    const double t = dt * i;
    const double s = speed(t);
    if (s > best) {
      best = s;
      best_t = t;
    }
  }
  // golden-section maximisation on the bracketing cell pair
  constexpr double inv_phi = 0.6180339887498949;
  double a = best_t - dt;
  double b = best_t + dt;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = speed(x1);
  double f2 = speed(x2);
  for (int it = 0; it < 80 && (b - a) > 1e-15 * period_; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = speed(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = speed(x1);
    }
  }
  return std::max({best, f1, f2}) / c_;
}

RetardedTime retarded_time(const SourceTrajectory& s, double t, const Vec3& x, const RetardedTimeOptions& opts) {
  const double tol = opts.tol > 0.0 ? opts.tol : 1e-12 * s.period();
  return solve_retarded_time([&s](double tau) { return s.position(tau); }, t, x, s.c(), s.beta_max(), tol,
                             s.period(), opts.collision_floor, opts.start);
}

SourceEnsemble::SourceEnsemble(std::vector<ChargeSource> sources) : sources_(std::move(sources)) {
  if (sources_.empty()) throw InvalidArgument("source ensemble needs at least one source");
  period_ = sources_.front().trajectory.period();
  for (const auto& s : sources_) {
    if (std::abs(s.trajectory.period() - period_) > 1e-12 * period_) {
      throw InvalidArgument("all sources must share one period");
    }
    if (!std::isfinite(s.charge)) throw InvalidArgument("source charge is not finite");
  }

  Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity()};
  Vec3 hi = -lo;
  min_separation_ = std::numeric_limits<double>::infinity();
  std::vector<Vec3> pos(sources_.size());
  for (int k = 0; k < kSeparationSamples; ++k) {
    const double t = period_ * k / kSeparationSamples;
    for (std::size_t i = 0; i < sources_.size(); ++i) {
      pos[i] = sources_[i].trajectory.position(t);
      theta_ = std::max(theta_, norm(pos[i]));
      for (int a = 0; a < 3; ++a) {
        lo[a] = std::min(lo[a], pos[i][a]);
        hi[a] = std::max(hi[a], pos[i][a]);
      }
      for (std::size_t j = 0; j < i; ++j) min_separation_ = std::min(min_separation_, norm(pos[i] - pos[j]));
    }
  }
  diameter_ = norm(hi - lo);
  if (sources_.size() > 1 && !(min_separation_ > collision_floor())) {
    throw InvalidArgument("source trajectories intersect (minimum separation " + std::to_string(min_separation_) + ")");
  }
}

double SourceEnsemble::beta_max() const {
  double b = 0.0;
  for (const auto& s : sources_) b = std::max(b, s.trajectory.beta_max());
  return b;
}

}  // namespace lorentz_orbits
