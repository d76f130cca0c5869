#pragma once

#include <cstddef>

// Regression fixtures locked from the first build's scans of the preset configs.
namespace fixtures {
inline constexpr std::size_t kForcedKeplerOrbits = 4;
inline constexpr double kForcedKeplerResidual = 1.25437e-12;
inline constexpr std::size_t kLwSingleOrbits = 1;
inline constexpr double kLwSingleResidual = 3.12021e-12;
// Allowed growth of a locked residual before the fixture check fails.
inline constexpr double kRegressionFactor = 10.0;
}  // namespace fixtures
