#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "lorentz_orbits/fields.hpp"
#include "lorentz_orbits/orbit_search.hpp"

namespace test {

using namespace lorentz_orbits;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline PhysicalConstants units(double c) {
  PhysicalConstants k;
  k.c = c;
  return k;
}

inline PeriodicPath circle_path(double radius, double period, std::size_t n, int winding = 1, Vec3 center = {}) {
  std::vector<Vec3> x(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double th = kTwoPi * winding * static_cast<double>(j) / static_cast<double>(n);
    x[j] = center + Vec3{radius * std::cos(th), radius * std::sin(th), 0.0};
  }
  return PeriodicPath(period, std::move(x));
}

// Source circling the origin in the z = 0 plane: R (cos wt, sin wt, 0).
inline ChargeSource circling_charge(double radius, double period, double c, double charge) {
  return {SourceTrajectory::circle({}, radius, period, c), charge};
}

inline std::shared_ptr<LienardWiechertModel> lw_model(std::vector<ChargeSource> sources, double c) {
  return std::make_shared<LienardWiechertModel>(SourceEnsemble(std::move(sources)), units(c));
}

inline Vec3 random_vec(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  return {u(rng), u(rng), u(rng)};
}

// Smooth closed path: base circle of radius r at height z plus low random harmonics.
inline PeriodicPath random_smooth_path(std::mt19937_64& rng, double period, std::size_t n, double r, double z,
                                       double amp) {
  std::normal_distribution<double> g(0.0, amp);
  std::vector<Vec3> a(3), b(3);
  for (auto& v : a) v = {g(rng), g(rng), g(rng)};
  for (auto& v : b) v = {g(rng), g(rng), g(rng)};
  std::vector<Vec3> x(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double th = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
    x[k] = {r * std::cos(th), r * std::sin(th), z};
    for (int j = 0; j < 3; ++j) x[k] += a[j] * std::cos((j + 1) * th) + b[j] * std::sin((j + 1) * th);
  }
  return PeriodicPath(period, std::move(x));
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace test
