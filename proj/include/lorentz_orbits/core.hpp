#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace lorentz_orbits {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  constexpr Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  constexpr Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
  constexpr Vec3& operator/=(double s) { x /= s; y /= s; z /= s; return *this; }

  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator/(Vec3 a, double s) { return a /= s; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
constexpr double norm2(const Vec3& a) { return dot(a, a); }

/// Row-major 3x3 matrix; `m.row[a][b]` is d(out_a)/d(in_b) when used as a Jacobian.
struct Mat3 {
  std::array<Vec3, 3> row{};

  Vec3 operator*(const Vec3& v) const { return {dot(row[0], v), dot(row[1], v), dot(row[2], v)}; }
  Vec3 transpose_times(const Vec3& v) const { return row[0] * v.x + row[1] * v.y + row[2] * v.z; }
  /// curl of the vector field whose Jacobian this is.
  Vec3 curl() const {
    return {row[2].y - row[1].z, row[0].z - row[2].x, row[1].x - row[0].y};
  }
};

/// Model constants. The defaults are the nondimensional system m = q = c = 1 with
/// 4*pi*eps0 = 1, so that a point charge q_i has Coulomb potential q_i / r.
struct PhysicalConstants {
  double c = 1.0;
  double eps0 = 1.0 / (4.0 * std::numbers::pi);
  double m = 1.0;
  double q = 1.0;

  /// Throws InvalidArgument unless c, eps0, m > 0 and q != 0 (all finite).
  void validate() const;
  double coulomb_factor() const { return 1.0 / (4.0 * std::numbers::pi * eps0); }
};

/// Closed path sampled on a uniform grid x_k = x(k T / N), k = 0..N-1.
/// Node N wraps to node 0; the endpoint is not stored twice.
class PeriodicPath {
 public:
  static constexpr std::size_t kMinNodes = 8;

  PeriodicPath(double period, std::vector<Vec3> nodes);

  double period() const { return period_; }
  std::size_t size() const { return nodes_.size(); }
  std::span<const Vec3> nodes() const { return nodes_; }
  const Vec3& operator[](std::size_t k) const { return nodes_[k]; }
  double time(std::size_t k) const { return period_ * static_cast<double>(k) / static_cast<double>(nodes_.size()); }
  double step() const { return period_ / static_cast<double>(nodes_.size()); }

 private:
  double period_;
  std::vector<Vec3> nodes_;
};

/// Trigonometric-interpolant derivative of uniformly sampled periodic data.
/// `values.size()` must be even and >= 2. The Nyquist mode is dropped, which makes
/// the operator real and antisymmetric (its adjoint is its negation).
std::vector<double> spectral_derivative(std::span<const double> values, double period);
std::vector<Vec3> spectral_derivative(std::span<const Vec3> values, double period);

std::vector<Vec3> path_velocity(const PeriodicPath& path);
double max_speed(const PeriodicPath& path);

}  // namespace lorentz_orbits
