#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "mcsafe/sim.hpp"

namespace mcsafe {

/// Writes one row per control step. The first line is a comment documenting
/// the column order; the second line is the CSV header.
void write_trajectory_csv(std::ostream& out, const SimResult& result);

/// Machine-readable run report: min barrier values, violation intervals,
/// relaxed/saturated step counts, filter timing.
nlohmann::json report_to_json(const SafetyReport& report, const Scenario& scenario);

/// Side-by-side report of a filtered and an unfiltered run of the same
/// scenario, with per-family min-barrier deltas.
nlohmann::json compare_to_json(const SafetyReport& filtered, const SafetyReport& nominal,
                               const Scenario& scenario);

}  // namespace mcsafe
