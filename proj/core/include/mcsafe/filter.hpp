#pragma once

#include "mcsafe/barriers.hpp"
#include "mcsafe/qp.hpp"

namespace mcsafe {

struct FilterResult {
  WrenchRateInput input;     ///< filtered wrench rate
  QpSolution qp;
  BarrierSnapshot barriers;  ///< barrier values at the filtered state
};

/// Assembles the four safety rows at x and projects the nominal input onto
/// them. Propagates SingularThrust from the row construction.
FilterResult filter(const AugmentedState& x, const WrenchRateInput& nominal,
                    const SafetyConfig& cfg, const VehicleParams& par,
                    const QpOptions& qp_options = {});

}  // namespace mcsafe
