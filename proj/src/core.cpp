#include "lorentz_orbits/core.hpp"

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include <fftw3.h>

#include "lorentz_orbits/errors.hpp"

namespace lorentz_orbits {

void PhysicalConstants::validate() const {
  if (!(std::isfinite(c) && c > 0.0)) throw InvalidArgument("speed of light c must be positive");
  if (!(std::isfinite(eps0) && eps0 > 0.0)) throw InvalidArgument("eps0 must be positive");
  if (!(std::isfinite(m) && m > 0.0)) throw InvalidArgument("particle mass m must be positive");
  if (!(std::isfinite(q) && q != 0.0)) throw InvalidArgument("particle charge q must be nonzero");
}

PeriodicPath::PeriodicPath(double period, std::vector<Vec3> nodes)
    : period_(period), nodes_(std::move(nodes)) {
  if (!(std::isfinite(period_) && period_ > 0.0)) throw InvalidArgument("path period must be positive");
  if (nodes_.size() < kMinNodes || nodes_.size() % 2 != 0) {
    throw InvalidArgument("path needs an even number of nodes >= 8, got " + std::to_string(nodes_.size()));
  }
  for (const auto& v : nodes_) {
    if (!v.finite()) throw InvalidArgument("path node is not finite");
  }
}

namespace {

// fftw_plan_* is not thread-safe; execution with the new-array interface is.
class PlanCache {
 public:
  struct Plans {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
  };

  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  Plans get(int n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    std::vector<double> real(static_cast<std::size_t>(n));
    std::vector<fftw_complex> spec(static_cast<std::size_t>(n / 2 + 1));
    Plans p;
    p.forward = fftw_plan_dft_r2c_1d(n, real.data(), spec.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.backward = fftw_plan_dft_c2r_1d(n, spec.data(), real.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(n, p);
    return p;
  }

  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }

 private:
  std::mutex mutex_;
  std::map<int, Plans> plans_;
};

}  // namespace

std::vector<double> spectral_derivative(std::span<const double> values, double period) {
  const auto n = values.size();
  if (n < 2 || n % 2 != 0) throw InvalidArgument("spectral derivative needs an even sample count");
  const int ni = static_cast<int>(n);
  auto plans = PlanCache::instance().get(ni);

  std::vector<double> in(values.begin(), values.end());
  std::vector<fftw_complex> spec(n / 2 + 1);
  fftw_execute_dft_r2c(plans.forward, in.data(), spec.data());

  const double omega = 2.0 * std::numbers::pi / period;
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double re = spec[k][0];
    const double im = spec[k][1];
    const double w = (k == n / 2) ? 0.0 : omega * static_cast<double>(k) * scale;
    spec[k][0] = -w * im;
    spec[k][1] = w * re;
  }
  std::vector<double> out(n);
  fftw_execute_dft_c2r(plans.backward, spec.data(), out.data());
  return out;
}

std::vector<Vec3> spectral_derivative(std::span<const Vec3> values, double period) {
  const auto n = values.size();
  std::array<std::vector<double>, 3> comp;
  for (int a = 0; a < 3; ++a) {
    comp[a].resize(n);
    for (std::size_t k = 0; k < n; ++k) comp[a][k] = values[k][a];
    comp[a] = spectral_derivative(comp[a], period);
  }
  std::vector<Vec3> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = {comp[0][k], comp[1][k], comp[2][k]};
  return out;
}

std::vector<Vec3> path_velocity(const PeriodicPath& path) {
  return spectral_derivative(path.nodes(), path.period());
}

double max_speed(const PeriodicPath& path) {
  double best = 0.0;
  for (const auto& v : path_velocity(path)) best = std::max(best, norm(v));
  return best;
}

}  // namespace lorentz_orbits
