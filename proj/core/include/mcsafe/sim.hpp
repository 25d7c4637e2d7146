#pragma once

#include <vector>

#include "mcsafe/filter.hpp"
#include "mcsafe/scenario.hpp"

namespace mcsafe {

/// Per-control-step log entry. Barrier values and commands refer to the state
/// at time t; the command is held over the following interval.
struct TrajectoryRecord {
  double t{};
  Eigen::Vector3d position;
  Eigen::Vector3d velocity;
  Eigen::Vector3d euler_zyx;  ///< roll, pitch, yaw [rad]
  Eigen::Vector3d angular_velocity;
  double thrust{};
  WrenchRateInput commanded;
  Eigen::VectorXd rotor_thrusts;  ///< post-saturation
  bool saturated{};
  BarrierSnapshot barriers;
  QpStatus qp_status = QpStatus::Optimal;
  std::vector<int> qp_active_set;
  double qp_slack{};
  double filter_time_us{};  ///< row construction + QP solve, 0 when filter off
};

struct ViolationInterval {
  double begin{};
  double end{};
};

struct FamilyReport {
  double min_value{};
  double min_time{};
  std::vector<ViolationInterval> violations;
};

struct SafetyReport {
  FamilyReport angular_velocity;  ///< on h_omega
  FamilyReport tilt;              ///< on h0_tilt
  FamilyReport velocity;          ///< on h0_vel
  FamilyReport position;          ///< on h0_pos
  long steps{};
  long relaxed_steps{};
  long saturated_steps{};
  double filter_time_mean_us{};
  double filter_time_max_us{};

  /// True iff some family dips below -tolerance.
  bool any_violation(double tolerance) const;
};

struct SimResult {
  std::vector<TrajectoryRecord> records;
  SafetyReport report;
};

/// One RK4 step of the augmented dynamics with the wrench rate held constant,
/// followed by polar re-orthonormalization of the attitude.
AugmentedState step(const AugmentedState& x, const WrenchRateInput& nu_held, double dt,
                    const VehicleParams& par);

/// Closed-loop fixed-step simulation: per control period build the nominal
/// input, optionally pass it through the safety filter, then integrate with
/// the rotor-saturated effective wrench. Deterministic.
SimResult run(const Scenario& scenario);

/// Nearest rotation matrix (polar factor).
Eigen::Matrix3d polar_rotation(const Eigen::Matrix3d& m);

}  // namespace mcsafe
