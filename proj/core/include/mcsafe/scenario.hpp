#pragma once

#include <filesystem>
#include <string>

#include "mcsafe/barriers.hpp"
#include "mcsafe/dynamics.hpp"
#include "mcsafe/nominal.hpp"

namespace mcsafe {

/// Everything one closed-loop run needs.
struct Scenario {
  std::string name = "unnamed";
  AugmentedState initial_state;
  double duration = 0.0;       ///< [s]
  double dt = 0.005;           ///< control period [s]
  VehicleParams vehicle;
  SafetyConfig safety;
  NominalGains gains;
  ReferenceTrajectory reference;
  bool filter_enabled = true;
  uint64_t seed = 0;           ///< used only by randomized harnesses

  /// Throws ConfigError on invalid settings. With the filter enabled the
  /// initial state must lie inside every configured safe set, including the
  /// composite backstepping sets.
  void validate() const;
};

/// The shipped reference scenario: hexacopter-X on a circular reference with
/// all four safety families active. Identical to scenarios/scenario_paper.json.
Scenario paper_scenario();

/// Loads a scenario from a JSON file. Angles are given in degrees and
/// converted on load. Throws ConfigError on parse or validation failure.
Scenario load_scenario(const std::filesystem::path& config_path);

}  // namespace mcsafe
