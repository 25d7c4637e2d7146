#pragma once

#include <stdexcept>
#include <string>

namespace mcsafe {

/// Invalid scenario / vehicle / safety configuration.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrust magnitude fell below the configured floor; the backstepping
/// constraint construction is singular there (|det g| = T^2).
struct SingularThrust : std::runtime_error {
  double thrust;
  long step;  ///< failing control step when raised from a simulation, else -1
  explicit SingularThrust(double t, long step_index = -1)
      : std::runtime_error("thrust " + std::to_string(t) +
                           " N is below the singularity floor" +
                           (step_index >= 0
                                ? " at step " + std::to_string(step_index)
                                : "")),
        thrust(t),
        step(step_index) {}
};

/// Integrator produced a non-finite state.
struct IntegrationDiverged : std::runtime_error {
  long step;
  explicit IntegrationDiverged(long step_index)
      : std::runtime_error("integration produced a non-finite state at step " +
                           std::to_string(step_index)),
        step(step_index) {}
};

}  // namespace mcsafe
