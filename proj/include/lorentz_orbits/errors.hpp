#pragma once

#include <stdexcept>
#include <string>

namespace lorentz_orbits {

/// Base class for every error raised by the library. `kind()` is a stable
/// machine-readable tag (used by the CLI error JSON).
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& msg) : Error("invalid_argument", msg) {}
};

class SuperluminalSource : public Error {
 public:
  explicit SuperluminalSource(const std::string& msg) : Error("superluminal_source", msg) {}
};

class CollisionProximity : public Error {
 public:
  CollisionProximity(const std::string& msg, double time, double distance)
      : Error("collision_proximity", msg), time_(time), distance_(distance) {}
  double time() const noexcept { return time_; }
  double distance() const noexcept { return distance_; }

 private:
  double time_;
  double distance_;
};

class MaxIterationsExceeded : public Error {
 public:
  explicit MaxIterationsExceeded(const std::string& msg) : Error("max_iterations_exceeded", msg) {}
};

class ValidationFailure : public Error {
 public:
  explicit ValidationFailure(const std::string& msg) : Error("validation_failure", msg) {}
};

class StepRejected : public Error {
 public:
  StepRejected(const std::string& msg, double time) : Error("step_rejected", msg), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

class NotAutonomous : public Error {
 public:
  explicit NotAutonomous(const std::string& msg) : Error("not_autonomous", msg) {}
};

class NoSolution : public Error {
 public:
  explicit NoSolution(const std::string& msg) : Error("no_solution", msg) {}
};

class InfeasiblePath : public Error {
 public:
  explicit InfeasiblePath(const std::string& msg) : Error("infeasible_path", msg) {}
};

class InfeasibleSeed : public Error {
 public:
  explicit InfeasibleSeed(const std::string& msg) : Error("infeasible_seed", msg) {}
};

class NoConvergence : public Error {
 public:
  explicit NoConvergence(const std::string& msg) : Error("no_convergence", msg) {}
};

class StalledAtInfeasibility : public Error {
 public:
  explicit StalledAtInfeasibility(const std::string& msg) : Error("stalled_at_infeasibility", msg) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error("config_error", msg) {}
};

}  // namespace lorentz_orbits
