#pragma once

#include <Eigen/Dense>

#include "mcsafe/dual.hpp"

namespace mcsafe {

template <class S>
using Vec2 = Eigen::Matrix<S, 2, 1>;
template <class S>
using Vec3 = Eigen::Matrix<S, 3, 1>;
template <class S>
using Vec4 = Eigen::Matrix<S, 4, 1>;
template <class S>
using Mat3 = Eigen::Matrix<S, 3, 3>;

inline constexpr double kGravityDefault = 9.81;  // m/s^2

template <class S>
Vec3<S> unit_z() {
  return Vec3<S>(S(0), S(0), S(1));
}

/// Cross-product matrix: skew(a) * b == a x b.
template <class S>
Mat3<S> skew(const Vec3<S>& a) {
  Mat3<S> m;
  m << S(0), -a.z(), a.y(),  //
      a.z(), S(0), -a.x(),   //
      -a.y(), a.x(), S(0);
  return m;
}

/// Maps (w_x, w_y) to the attitude-rate direction of the body z axis:
/// d/dt(R e3) = R * kTiltMap * w_xy. Columns are e2 x e3-style axes.
inline const Eigen::Matrix<double, 3, 2>& tilt_map() {
  static const Eigen::Matrix<double, 3, 2> a = [] {
    Eigen::Matrix<double, 3, 2> m;
    m << 0, 1, -1, 0, 0, 0;
    return m;
  }();
  return a;
}

/// Rigid-body multicopter state augmented with the total thrust, so the
/// thrust rate becomes an input channel.
template <class S>
struct AugmentedStateT {
  Vec3<S> position;          ///< p, inertial frame [m]
  Vec3<S> velocity;          ///< v, inertial frame [m/s]
  Mat3<S> attitude;          ///< R, body-to-inertial rotation
  Vec3<S> angular_velocity;  ///< w, body frame [rad/s]
  S thrust;                  ///< T, total thrust magnitude [N]

  /// Body z axis expressed in the inertial frame (z_B = R e3).
  Vec3<S> body_z_axis() const { return attitude.col(2); }
  /// Net rotor force in the inertial frame (f = -T z_B).
  Vec3<S> force() const { return Vec3<S>(-thrust * body_z_axis()); }
  Vec2<S> omega_xy() const { return angular_velocity.template head<2>(); }
};

using AugmentedState = AugmentedStateT<double>;

template <class S>
struct AugmentedStateRateT {
  Vec3<S> position;
  Vec3<S> velocity;
  Mat3<S> attitude;
  Vec3<S> angular_velocity;
  S thrust;
};

using AugmentedStateRate = AugmentedStateRateT<double>;

/// Decision variable of the safety filter: nu_a = (T_dot, M).
template <class S>
struct WrenchRateT {
  S thrust_rate{};                       ///< [N/s]
  Vec3<S> torque = Vec3<S>::Zero();      ///< body torque [N m]

  Vec4<S> as_vector() const {
    Vec4<S> v;
    v << thrust_rate, torque.x(), torque.y(), torque.z();
    return v;
  }
  static WrenchRateT from_vector(const Vec4<S>& v) {
    return WrenchRateT{v[0], v.template tail<3>()};
  }
};

using WrenchRateInput = WrenchRateT<double>;

/// Lifts a state to dual scalars seeded with the given rate, so that any
/// scalar function evaluated on the result returns (value, time derivative
/// along that rate).
template <class S>
AugmentedStateT<Dual<S>> seed_state(const AugmentedStateT<S>& x,
                                    const AugmentedStateRateT<S>& dx) {
  AugmentedStateT<Dual<S>> out;
  for (int i = 0; i < 3; ++i) {
    out.position[i] = Dual<S>(x.position[i], dx.position[i]);
    out.velocity[i] = Dual<S>(x.velocity[i], dx.velocity[i]);
    out.angular_velocity[i] = Dual<S>(x.angular_velocity[i], dx.angular_velocity[i]);
    for (int j = 0; j < 3; ++j) {
      out.attitude(i, j) = Dual<S>(x.attitude(i, j), dx.attitude(i, j));
    }
  }
  out.thrust = Dual<S>(x.thrust, dx.thrust);
  return out;
}

/// ZYX (yaw-pitch-roll) Euler angles to a body-to-inertial rotation matrix.
Eigen::Matrix3d euler_zyx_to_rotation(double roll, double pitch, double yaw);

/// Inverse of euler_zyx_to_rotation; returns (roll, pitch, yaw).
Eigen::Vector3d rotation_to_euler_zyx(const Eigen::Matrix3d& R);

}  // namespace mcsafe
