#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "lorentz_orbits/core.hpp"
#include "lorentz_orbits/sources.hpp"

namespace lorentz_orbits {

struct FieldValues {
  double V = 0.0;
  Vec3 A;
  Vec3 E;
  Vec3 B;
};

/// First derivatives of the potentials. jac_A.row[a][b] = dA_a / dx_b.
struct PotentialDerivatives {
  Vec3 grad_V;
  double dV_dt = 0.0;
  Mat3 jac_A;
  Vec3 dA_dt;
};

/// Scalar/vector potentials together with the fields E = -grad V - dA/dt, B = curl A.
/// Implementations are immutable; every evaluation is a pure function of (t, x).
class ElectromagneticModel {
 public:
  ElectromagneticModel(PhysicalConstants constants, std::vector<SourceTrajectory> singular, double collision_floor);
  virtual ~ElectromagneticModel() = default;

  virtual FieldValues evaluate(double t, const Vec3& x) const = 0;
  /// Default: central differences of `evaluate` (step 1e-6 relative).
  virtual PotentialDerivatives potential_derivatives(double t, const Vec3& x) const;
  /// True when V and A do not depend on t.
  virtual bool autonomous() const = 0;
  virtual std::string name() const = 0;
  /// Period of the time dependence; 0 when the model is autonomous.
  virtual double period() const { return 0.0; }
  /// True when A vanishes identically.
  virtual bool zero_vector_potential() const { return false; }

  const PhysicalConstants& constants() const { return constants_; }
  const std::vector<SourceTrajectory>& singular_trajectories() const { return singular_; }
  double collision_floor() const { return collision_floor_; }
  /// min_i |x - r_i(t)|, or +inf for a model without singularities.
  double distance_to_singularities(double t, const Vec3& x) const;

 private:
  PhysicalConstants constants_;
  std::vector<SourceTrajectory> singular_;
  double collision_floor_;
};

using ModelPtr = std::shared_ptr<const ElectromagneticModel>;

// ---------------------------------------------------------------------------
// Lienard-Wiechert fields of one moving point charge.

struct RetardedFrame {
  double t_ret = 0.0;
  Vec3 r_ret;
  Vec3 rdot_ret;
  Vec3 rddot_ret;
  Vec3 eta;       ///< unit vector from r(t_ret) to x
  Vec3 beta;      ///< rdot(t_ret) / c
  Vec3 beta_dot;  ///< rddot(t_ret) / c
  double dist = 0.0;     ///< |x - r(t_ret)|
  double doppler = 1.0;  ///< 1 - eta . beta
  int iterations = 0;
};

RetardedFrame lw_frame(const ChargeSource& source, double t, const Vec3& x, const PhysicalConstants& k,
                       double collision_floor = 0.0);

struct LwPotentials {
  double V = 0.0;
  Vec3 A;
};
struct LwFields {
  Vec3 E;
  Vec3 B;
};

LwPotentials lw_potentials(const ChargeSource& source, const RetardedFrame& f, const PhysicalConstants& k);
LwFields lw_fields(const ChargeSource& source, const RetardedFrame& f, const PhysicalConstants& k);
/// Analytic first derivatives of V_i and A_i, using grad t_ret = -eta / (c doppler)
/// and dt_ret/dt = 1 / doppler.
PotentialDerivatives lw_potential_derivatives(const ChargeSource& source, const RetardedFrame& f,
                                              const PhysicalConstants& k);

LwPotentials lw_potentials(const ChargeSource& source, double t, const Vec3& x, const PhysicalConstants& k);
LwFields lw_fields(const ChargeSource& source, double t, const Vec3& x, const PhysicalConstants& k);

/// Sum of Lienard-Wiechert contributions of an ensemble of periodic charges.
class LienardWiechertModel final : public ElectromagneticModel {
 public:
  LienardWiechertModel(SourceEnsemble ensemble, PhysicalConstants constants);

  FieldValues evaluate(double t, const Vec3& x) const override;
  PotentialDerivatives potential_derivatives(double t, const Vec3& x) const override;
  bool autonomous() const override;
  std::string name() const override { return "lienard-wiechert"; }
  double period() const override { return ensemble_.period(); }

  const SourceEnsemble& ensemble() const { return ensemble_; }

 private:
  SourceEnsemble ensemble_;
};

// ---------------------------------------------------------------------------
// Forced relativistic Kepler problem: force -alpha x / |x|^3 + grad U(t, x).

struct Forcing {
  std::function<double(double, const Vec3&)> value;
  std::function<Vec3(double, const Vec3&)> gradient;
  std::function<double(double, const Vec3&)> time_derivative;
  double period = 0.0;  ///< 0 for time-independent forcing
  std::string label = "none";

  bool autonomous() const { return period == 0.0; }

  static Forcing none();
  /// U = epsilon (1 + modulation cos(2 pi t / period)) exp(-|x|^2); period 0 drops the time factor.
  static Forcing gaussian(double epsilon, double period, double modulation = 1.0);
};

class KeplerModel final : public ElectromagneticModel {
 public:
  struct Options {
    /// Reject forcings with U <= 0 on the validation probe set.
    bool strict = false;
  };

  KeplerModel(double alpha, Forcing forcing, PhysicalConstants constants, Options opts);
  KeplerModel(double alpha, Forcing forcing, PhysicalConstants constants)
      : KeplerModel(alpha, std::move(forcing), constants, Options{}) {}

  FieldValues evaluate(double t, const Vec3& x) const override;
  PotentialDerivatives potential_derivatives(double t, const Vec3& x) const override;
  bool autonomous() const override { return forcing_.autonomous(); }
  std::string name() const override { return "kepler"; }
  double period() const override { return forcing_.period; }
  bool zero_vector_potential() const override { return true; }

  double alpha() const { return alpha_; }
  const Forcing& forcing() const { return forcing_; }

 private:
  double alpha_;
  Forcing forcing_;
};

std::shared_ptr<const KeplerModel> kepler_model(double alpha, Forcing forcing, PhysicalConstants constants,
                                                bool strict = false);

// ---------------------------------------------------------------------------
// User-supplied analytic potentials and fields.

struct AnalyticFieldSpec {
  std::string name = "analytic";
  std::function<double(double, const Vec3&)> V;
  std::function<Vec3(double, const Vec3&)> A;
  std::function<Vec3(double, const Vec3&)> E;
  std::function<Vec3(double, const Vec3&)> B;
  bool autonomous = true;
  double period = 0.0;
  bool zero_vector_potential = false;
  std::vector<SourceTrajectory> singular;
};

/// Registration runs a consistency probe: at 20 pseudo-random points E must match
/// -grad V - dA/dt and B must match curl A (central differences) within 1e-5
/// relative; otherwise ValidationFailure is thrown.
class AnalyticModel final : public ElectromagneticModel {
 public:
  AnalyticModel(AnalyticFieldSpec spec, PhysicalConstants constants);

  FieldValues evaluate(double t, const Vec3& x) const override;
  bool autonomous() const override { return spec_.autonomous; }
  std::string name() const override { return spec_.name; }
  double period() const override { return spec_.autonomous ? 0.0 : spec_.period; }
  bool zero_vector_potential() const override { return spec_.zero_vector_potential; }

 private:
  AnalyticFieldSpec spec_;
};

/// E = B = 0, V = A = 0.
ModelPtr zero_field_model(PhysicalConstants constants);
/// Uniform static magnetic field, A = B0 x x / 2, V = 0.
ModelPtr uniform_magnetic_model(Vec3 b0, PhysicalConstants constants);
/// Uniform static electric field, V = -E0 . x, A = 0.
ModelPtr uniform_electric_model(Vec3 e0, PhysicalConstants constants);

/// V, A, E, B of the model at (t, x).
FieldValues total_fields(const ElectromagneticModel& model, double t, const Vec3& x);

}  // namespace lorentz_orbits
