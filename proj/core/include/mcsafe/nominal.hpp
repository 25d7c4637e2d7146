#pragma once

#include <Eigen/Dense>

#include "mcsafe/dynamics.hpp"
#include "mcsafe/types.hpp"

namespace mcsafe {

struct ReferenceSample {
  Eigen::Vector3d position;
  Eigen::Vector3d velocity;
  Eigen::Vector3d acceleration;
  Eigen::Vector3d jerk;
};

/// Position reference with analytic derivatives up to the jerk, plus a
/// desired yaw rate. Either a fixed hover point or a horizontal circle with
/// a vertical sinusoid.
class ReferenceTrajectory {
 public:
  static ReferenceTrajectory hover(const Eigen::Vector3d& point, double yaw_rate = 0.0);
  static ReferenceTrajectory orbit(const Eigen::Vector3d& center, double radius,
                                   double angular_rate, double vertical_amplitude,
                                   double vertical_rate, double yaw_rate = 0.0);

  ReferenceSample sample(double t) const;
  double yaw_rate() const { return yaw_rate_; }
  bool is_hover() const { return kind_ == Kind::Hover; }

 private:
  enum class Kind { Hover, Orbit };
  Kind kind_ = Kind::Hover;
  Eigen::Vector3d center_ = Eigen::Vector3d::Zero();
  double radius_ = 0.0;
  double angular_rate_ = 0.0;
  double vertical_amplitude_ = 0.0;
  double vertical_rate_ = 0.0;
  double yaw_rate_ = 0.0;
};

/// Gains of the nominal tracking controller, all positive.
struct NominalGains {
  double position = 1.2;     ///< K_p [1/s^2]
  double velocity = 1.32;    ///< K_v [1/s]
  double thrust = 10.0;      ///< k_T [1/s]
  double attitude = 24.0;    ///< K_R [1/s^2]
  double rate = 12.0;        ///< K_w [1/s]
  double yaw_rate = 6.0;     ///< k_psi [1/s]

  void validate() const;
};

/// Backstepping-style position tracker producing the wrench-rate input
/// (T_dot, M): desired force -> desired thrust axis -> body-rate command ->
/// torque, with first-order thrust tracking for the T_dot channel.
///
/// Stateful only through the frozen fallback axis used when the desired
/// force degenerates.
class NominalController {
 public:
  NominalController(ReferenceTrajectory reference, NominalGains gains);

  WrenchRateInput operator()(const AugmentedState& x, double t, const VehicleParams& par);

  const ReferenceTrajectory& reference() const { return reference_; }

 private:
  ReferenceTrajectory reference_;
  NominalGains gains_;
  Eigen::Vector3d last_axis_ = Eigen::Vector3d(0, 0, 1);
};

}  // namespace mcsafe
