#include "mcsafe/filter.hpp"

namespace mcsafe {

FilterResult filter(const AugmentedState& x, const WrenchRateInput& nominal,
                    const SafetyConfig& cfg, const VehicleParams& par,
                    const QpOptions& qp_options) {
  FilterResult out;
  out.barriers = barriers::snapshot(x, cfg, par);

  const auto rows = barriers::all_rows(x, cfg, par);
  QpProblem problem;
  problem.target = nominal.as_vector();
  problem.rows.assign(rows.begin(), rows.end());
  out.qp = solve_qp(problem, qp_options);
  out.input = WrenchRateInput::from_vector(Eigen::Vector4d(out.qp.nu_star));
  return out;
}

}  // namespace mcsafe
