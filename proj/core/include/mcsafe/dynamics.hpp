#pragma once

#include <Eigen/Dense>

#include "mcsafe/errors.hpp"
#include "mcsafe/types.hpp"

namespace mcsafe {

/// Physical vehicle description plus the control allocation map.
struct VehicleParams {
  double mass{};                ///< [kg]
  Eigen::Matrix3d inertia;      ///< J [kg m^2], symmetric positive definite
  double gravity = kGravityDefault;
  Eigen::MatrixXd B;            ///< 4 x n_rotors control effectiveness, [T, M]' = B u
  double rotor_thrust_max{};    ///< per-rotor bound [N], u_i in [0, u_max]

  int rotor_count() const { return static_cast<int>(B.cols()); }
  double hover_thrust() const { return mass * gravity; }

  /// Throws ConfigError if mass/inertia/B violate their invariants.
  void validate() const;
};

/// Hexacopter-X effectiveness matrix: rotors at 30 + k*60 deg from body x,
/// row 0 sums thrust, rows 1-2 are the arm moments, row 3 alternates the
/// rotor drag torque sign.
Eigen::MatrixXd hexacopter_x_effectiveness(double arm_length, double torque_coeff);

/// Time derivative of the augmented state under the wrench-rate input.
/// Affine in nu for fixed x.
template <class S>
AugmentedStateRateT<S> state_derivative(const AugmentedStateT<S>& x,
                                        const WrenchRateT<S>& nu,
                                        const VehicleParams& par) {
  AugmentedStateRateT<S> d;
  d.position = x.velocity;
  d.velocity = S(par.gravity) * unit_z<S>() + x.force() / S(par.mass);
  d.attitude = x.attitude * skew<S>(x.angular_velocity);
  const Mat3<S> J = par.inertia.cast<S>();
  const Vec3<S> coriolis = x.angular_velocity.cross(Vec3<S>(J * x.angular_velocity));
  d.angular_velocity = par.inertia.inverse().cast<S>() * Vec3<S>(nu.torque - coriolis);
  d.thrust = nu.thrust_rate;
  return d;
}

inline AugmentedStateRate state_derivative(const AugmentedState& x,
                                           const WrenchRateInput& nu,
                                           const VehicleParams& par) {
  return state_derivative<double>(x, nu, par);
}

/// d/dt of the force vector f = -T z_B:  -T R A w_xy - T_dot z_B.
template <class S>
Vec3<S> force_rate(const AugmentedStateT<S>& x, const WrenchRateT<S>& nu) {
  const Vec3<S> tilt_rate = x.attitude * (tilt_map().cast<S>() * x.omega_xy());
  return Vec3<S>(-x.thrust * tilt_rate - nu.thrust_rate * x.body_z_axis());
}

/// Minimum-norm rotor thrusts realizing the total wrench [T, M']'.
/// Throws ConfigError when B is row-rank deficient.
Eigen::VectorXd allocate(const Eigen::Vector4d& wrench, const VehicleParams& par);

struct SaturationResult {
  Eigen::VectorXd rotor_thrusts;     ///< clamped to [0, u_max]
  Eigen::Vector4d effective_wrench;  ///< B * u_sat
  bool saturated{};                  ///< true iff any rotor was clamped
};

/// Element-wise clamp of rotor thrusts to [0, rotor_thrust_max].
SaturationResult saturate(const Eigen::VectorXd& rotor_thrusts, const VehicleParams& par);

}  // namespace mcsafe
