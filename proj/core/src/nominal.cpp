#include "mcsafe/nominal.hpp"

#include <cmath>

#include "mcsafe/errors.hpp"

namespace mcsafe {

ReferenceTrajectory ReferenceTrajectory::hover(const Eigen::Vector3d& point,
                                               double yaw_rate) {
  ReferenceTrajectory r;
  r.kind_ = Kind::Hover;
  r.center_ = point;
  r.yaw_rate_ = yaw_rate;
  return r;
}

ReferenceTrajectory ReferenceTrajectory::orbit(const Eigen::Vector3d& center,
                                               double radius, double angular_rate,
                                               double vertical_amplitude,
                                               double vertical_rate, double yaw_rate) {
  ReferenceTrajectory r;
  r.kind_ = Kind::Orbit;
  r.center_ = center;
  r.radius_ = radius;
  r.angular_rate_ = angular_rate;
  r.vertical_amplitude_ = vertical_amplitude;
  r.vertical_rate_ = vertical_rate;
  r.yaw_rate_ = yaw_rate;
  return r;
}

ReferenceSample ReferenceTrajectory::sample(double t) const {
  ReferenceSample s;
  if (kind_ == Kind::Hover) {
    s.position = center_;
    s.velocity.setZero();
    s.acceleration.setZero();
    s.jerk.setZero();
    return s;
  }
  const double a = angular_rate_;
  const double b = vertical_rate_;
  const double ca = std::cos(a * t), sa = std::sin(a * t);
  const double cb = std::cos(b * t), sb = std::sin(b * t);
  s.position = center_ + Eigen::Vector3d(radius_ * ca, radius_ * sa,
                                         vertical_amplitude_ * sb);
  s.velocity = Eigen::Vector3d(-radius_ * a * sa, radius_ * a * ca,
                               vertical_amplitude_ * b * cb);
  s.acceleration = Eigen::Vector3d(-radius_ * a * a * ca, -radius_ * a * a * sa,
                                   -vertical_amplitude_ * b * b * sb);
  s.jerk = Eigen::Vector3d(radius_ * a * a * a * sa, -radius_ * a * a * a * ca,
                           -vertical_amplitude_ * b * b * b * cb);
  return s;
}

void NominalGains::validate() const {
  for (double g : {position, velocity, thrust, attitude, rate, yaw_rate}) {
    if (!(g > 0.0)) {
      throw ConfigError("nominal controller gains must be positive");
    }
  }
}

NominalController::NominalController(ReferenceTrajectory reference, NominalGains gains)
    : reference_(std::move(reference)), gains_(gains) {
  gains_.validate();
}

WrenchRateInput NominalController::operator()(const AugmentedState& x, double t,
                                              const VehicleParams& par) {
  const ReferenceSample ref = reference_.sample(t);
  const Eigen::Vector3d e3 = Eigen::Vector3d::UnitZ();

  const Eigen::Vector3d pos_err = x.position - ref.position;
  const Eigen::Vector3d vel_err = x.velocity - ref.velocity;

  // Desired force: v_dot = g e3 + f/m should track the commanded acceleration.
  const Eigen::Vector3d accel_cmd =
      ref.acceleration - gains_.position * pos_err - gains_.velocity * vel_err;
  const Eigen::Vector3d force_des = par.mass * (accel_cmd - par.gravity * e3);

  const double force_norm = force_des.norm();
  Eigen::Vector3d axis_des = last_axis_;
  if (force_norm > 1e-3) {
    axis_des = -force_des / force_norm;  // f = -T z_B
    last_axis_ = axis_des;
  }
  const double thrust_des = force_norm;

  // Analytic rate of the desired thrust magnitude.
  const Eigen::Vector3d accel_actual = par.gravity * e3 + x.force() / par.mass;
  const Eigen::Vector3d force_des_rate =
      par.mass * (ref.jerk - gains_.position * vel_err -
                  gains_.velocity * (accel_actual - ref.acceleration));
  const double thrust_des_rate =
      force_norm > 1e-3 ? force_des.dot(force_des_rate) / force_norm : 0.0;

  WrenchRateInput out;
  out.thrust_rate = -gains_.thrust * (x.thrust - thrust_des) + thrust_des_rate;

  // Steer the body z axis toward the desired axis; regulate the yaw rate.
  const Eigen::Vector3d att_err =
      x.attitude.transpose() * x.body_z_axis().cross(axis_des);
  Eigen::Vector3d omega_accel_cmd;
  omega_accel_cmd.head<2>() = gains_.attitude * att_err.head<2>() -
                              gains_.rate * x.omega_xy();
  omega_accel_cmd[2] =
      -gains_.yaw_rate * (x.angular_velocity[2] - reference_.yaw_rate());
  out.torque = par.inertia * omega_accel_cmd +
               x.angular_velocity.cross(par.inertia * x.angular_velocity);
  return out;
}

}  // namespace mcsafe
