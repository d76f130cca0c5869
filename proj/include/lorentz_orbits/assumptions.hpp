#pragma once

#include <cstdint>
#include <vector>

#include "lorentz_orbits/fields.hpp"

namespace lorentz_orbits {

/// Sampling plan for the hypothesis checks. Shells sit at radii delta * 2^-j around
/// every singular trajectory; far spheres are centred at the origin.
struct ProbeSpec {
  /// Shell radius; <= 0 picks half the minimum inter-source separation (0.5 for a single source).
  double delta = 0.0;
  int shell_levels = 7;
  int n_times = 128;
  int n_directions = 256;
  int bulk_samples = 4096;
  /// Far radii are max(Theta, 1) * 2^j for j in [far_min_level, far_max_level] unless far_radii is set.
  int far_min_level = 2;
  int far_max_level = 8;
  std::vector<double> far_radii;
  int far_times = 32;
  int far_directions = 128;
  std::uint64_t rng_seed = 1;
  int threads = 1;
};

struct Witness {
  double t = 0.0;
  Vec3 x;
  /// Value of the check's margin at this point (kappa estimate, kappa' estimate, ...).
  double value = 0.0;
  /// Index of the nearest singular trajectory, -1 if none.
  int source = -1;
  double distance_to_source = 0.0;
};

/// V < 0 everywhere and V <= -kappa / |x - r_i(t)| inside the delta shells.
struct SingularityCheck {
  bool pass = false;
  bool negative_everywhere = false;
  double kappa = 0.0;   ///< min over shell samples of -V |x - r_i(t)|
  double delta = 0.0;
  std::vector<double> shell_radius;
  std::vector<double> shell_kappa;
  Witness witness;      ///< sample with the smallest -V |x - r_i|
};

/// |A| <= -(kappa'/c) V with kappa' < 1.
struct VectorPotentialCheck {
  bool pass = false;
  bool trivial = false;  ///< A vanished at every sample
  double kappa_prime = 0.0;  ///< max over samples of c |A| / (-V)
  Witness witness;
};

struct DecayRow {
  double radius = 0.0;
  double max_quantity = 0.0;  ///< max of |V| + |E| + |B| on the sphere
  Witness witness;
};

/// |V| + |grad V + dA/dt| + |curl A| = |V| + |E| + |B| -> 0 as |x| -> infinity.
struct DecayCheck {
  bool pass = false;
  double theta = 0.0;
  double fitted_c = 0.0;  ///< max over rows of quantity * (radius - theta)
  std::vector<DecayRow> rows;
};

struct AssumptionReport {
  SingularityCheck singular;
  VectorPotentialCheck vector_potential;
  DecayCheck decay;
  std::size_t samples = 0;

  bool all_pass() const { return singular.pass && vector_potential.pass && decay.pass; }
};

AssumptionReport check_assumptions(const ElectromagneticModel& model, const ProbeSpec& spec = {});

/// Directions on the unit sphere from a Fibonacci lattice.
std::vector<Vec3> sphere_directions(int count);

}  // namespace lorentz_orbits
