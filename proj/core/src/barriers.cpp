#include "mcsafe/barriers.hpp"

#include <cmath>

namespace mcsafe {

void SafetyConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) {
      throw ConfigError(std::string(name) + " must be strictly positive");
    }
  };
  positive(a_omega, "a_omega");
  positive(a1_tilt, "a1_tilt");
  positive(a2_tilt, "a2_tilt");
  positive(a0_vel, "a0_vel");
  positive(a0_pos, "a0_pos");
  positive(c_vel, "c_vel");
  positive(c_pos, "c_pos");
  positive(lambda_vel, "lambda_vel");
  for (double m : mu_vel) positive(m, "mu_vel");
  for (double m : mu_pos) positive(m, "mu_pos");
  for (double l : lambda_pos) positive(l, "lambda_pos");
  positive(thrust_min, "thrust_min");
  if ((P_omega_diag.array() < 0.0).any() || (P_vel_diag.array() < 0.0).any() ||
      (P_pos_diag.array() < 0.0).any()) {
    throw ConfigError("quadratic barrier weights must be non-negative");
  }
  if (std::abs(tilt_axis_des.norm() - 1.0) > 1e-9) {
    throw ConfigError("desired tilt axis must be a unit vector");
  }
  if (!(tilt_max > 0.0 && tilt_max < M_PI)) {
    throw ConfigError("maximum tilt angle must lie in (0, pi)");
  }
  if (c_vel < a0_vel || c_pos < a0_pos) {
    throw ConfigError("virtual-controller gains must satisfy c >= a0");
  }
}

std::string_view to_string(BarrierFamily family) {
  switch (family) {
    case BarrierFamily::AngularVelocity:
      return "angular_velocity";
    case BarrierFamily::Tilt:
      return "tilt";
    case BarrierFamily::Velocity:
      return "velocity";
    case BarrierFamily::Position:
      return "position";
  }
  return "unknown";
}

namespace barriers {

namespace {

/// Extracts the affine row of h_dot(x, nu) + slope * h(x) >= 0 by seeding the
/// flow derivative at nu = 0 and the four basis inputs. Exact because the
/// state derivative is affine in nu.
template <class F>
AffineConstraintRow extract_row(F&& fn, const AugmentedState& x, double slope,
                                BarrierFamily family, const VehicleParams& par) {
  AffineConstraintRow row;
  row.family = family;
  const auto [h, hdot0] = value_and_flow_derivative(fn, x, WrenchRateInput{}, par);
  for (int i = 0; i < 4; ++i) {
    Eigen::Vector4d basis = Eigen::Vector4d::Zero();
    basis[i] = 1.0;
    const auto [_, hdot] =
        value_and_flow_derivative(fn, x, WrenchRateInput::from_vector(basis), par);
    row.coeff[i] = hdot - hdot0;
  }
  row.offset = hdot0 + slope * h;
  return row;
}

Eigen::Vector2d omega_xy_drift(const AugmentedState& x, const VehicleParams& par) {
  const Eigen::Vector3d w = x.angular_velocity;
  return (par.inertia.inverse() * (-w.cross(par.inertia * w))).head<2>();
}

/// Right pseudo-inverse solve y = G' (G G')^-1 rhs for the 2x3 map from
/// torque to omega_xy acceleration.
Eigen::Vector3d torque_from_omega_xy_accel(const Eigen::Vector2d& accel,
                                           const VehicleParams& par) {
  const Eigen::Matrix<double, 2, 3> G = par.inertia.inverse().topRows<2>();
  return G.transpose() * (G * G.transpose()).ldlt().solve(accel);
}

}  // namespace

AffineConstraintRow row_omega(const AugmentedState& x, const SafetyConfig& cfg,
                              const VehicleParams& par) {
  AffineConstraintRow row;
  row.family = BarrierFamily::AngularVelocity;
  const Eigen::Vector3d w = x.angular_velocity;
  const Eigen::Vector3d Pw = cfg.P_omega_diag.cwiseProduct(w);
  const Eigen::Matrix3d J_inv = par.inertia.inverse();
  row.coeff[0] = 0.0;  // thrust rate does not enter the rotational constraint
  row.coeff.tail<3>() = -2.0 * J_inv * Pw;
  row.offset = 2.0 * Pw.dot(J_inv * w.cross(par.inertia * w)) +
               cfg.a_omega * h_omega(x, cfg);
  return row;
}

AffineConstraintRow row_tilt(const AugmentedState& x, const SafetyConfig& cfg,
                             const VehicleParams& par) {
  AffineConstraintRow row;
  row.family = BarrierFamily::Tilt;
  const Eigen::Vector3d axis_des = cfg.tilt_axis_des;
  const Eigen::Matrix3d J_inv = par.inertia.inverse();
  const Eigen::Matrix<double, 3, 2>& A = tilt_map();
  const Eigen::Vector3d tilt_rate = x.attitude * (A * x.omega_xy());

  // d/dt(R A w_xy) = R w^x A w_xy + R A P2 w_dot, split into drift and torque.
  const Eigen::Vector3d gyro = x.attitude * x.angular_velocity.cross(A * x.omega_xy());
  const Eigen::Vector3d drift = x.attitude * (A * omega_xy_drift(x, par));
  const double h0 = h0_tilt(x, cfg);
  const double h0_rate = tilt_rate.dot(axis_des);
  const double h1 = h0_rate + cfg.a1_tilt * h0;

  row.coeff[0] = 0.0;
  // M enters through w_dot_xy = [J^-1 M]_xy; coefficient is J^-1 (A P2)' R' z_d.
  Eigen::Matrix<double, 2, 3> P2 = Eigen::Matrix<double, 2, 3>::Zero();
  P2(0, 0) = P2(1, 1) = 1.0;
  row.coeff.tail<3>() = J_inv.transpose() * (A * P2).transpose() *
                        (x.attitude.transpose() * axis_des);
  row.offset = (gyro + drift).dot(axis_des) + cfg.a1_tilt * h0_rate +
               cfg.a2_tilt * h1;
  return row;
}

AffineConstraintRow row_vel(const AugmentedState& x, const SafetyConfig& cfg,
                            const VehicleParams& par) {
  detail::require_thrust(x.thrust, cfg);
  return extract_row([&](const auto& xs) { return h_vel(xs, cfg, par); }, x,
                     cfg.a0_vel, BarrierFamily::Velocity, par);
}

AffineConstraintRow row_pos(const AugmentedState& x, const SafetyConfig& cfg,
                            const VehicleParams& par) {
  detail::require_thrust(x.thrust, cfg);
  return extract_row([&](const auto& xs) { return h_pos(xs, cfg, par); }, x,
                     cfg.a0_pos, BarrierFamily::Position, par);
}

std::array<AffineConstraintRow, 4> all_rows(const AugmentedState& x,
                                            const SafetyConfig& cfg,
                                            const VehicleParams& par) {
  return {row_omega(x, cfg, par), row_tilt(x, cfg, par), row_vel(x, cfg, par),
          row_pos(x, cfg, par)};
}

BarrierSnapshot snapshot(const AugmentedState& x, const SafetyConfig& cfg,
                         const VehicleParams& par) {
  BarrierSnapshot s;
  s.h_omega = h_omega(x, cfg);
  s.h0_tilt = h0_tilt(x, cfg);
  s.h1_tilt = h1_tilt(x, cfg);
  s.h0_vel = h0_vel(x, cfg);
  s.h_vel = h_vel(x, cfg, par);
  s.h0_pos = h0_pos(x, cfg);
  s.h_pos = h_pos(x, cfg, par);
  return s;
}

WrenchRateInput velocity_chain_controller(const AugmentedState& x,
                                          const SafetyConfig& cfg,
                                          const VehicleParams& par,
                                          double lambda_final) {
  const InnerLoopCommand<double> k1 = k1_vel(x, cfg, par);

  // d/dt of the omega_xy command along the flow with T_dot = k1.thrust_rate;
  // the command does not read omega_z or M-driven coordinates beyond that.
  const WrenchRateInput closure{k1.thrust_rate, Eigen::Vector3d::Zero()};
  const AugmentedStateRate dx = state_derivative(x, closure, par);
  const auto lifted = seed_state(x, dx);
  const InnerLoopCommand<Dual<double>> k1_lift = k1_vel(lifted, cfg, par);
  const Eigen::Vector2d k1_xy_rate(k1_lift.omega_xy[0].dot, k1_lift.omega_xy[1].dot);

  // Final level: solve for M through [J^-1 ]_xy.
  const Eigen::Vector3d f_res = x.force() - k0_vel(x, cfg, par);
  const Eigen::Vector2d chain_term = -(cfg.mu_vel[1] / cfg.mu_vel[0]) *
                                     (-x.thrust * (x.attitude * tilt_map()).transpose() * f_res);
  const Eigen::Vector2d damping =
      0.5 * lambda_final * (x.omega_xy() - k1.omega_xy);
  const Eigen::Vector2d accel =
      -omega_xy_drift(x, par) + chain_term + k1_xy_rate - damping;
  return {k1.thrust_rate, torque_from_omega_xy_accel(accel, par)};
}

WrenchRateInput position_chain_controller(const AugmentedState& x,
                                          const SafetyConfig& cfg,
                                          const VehicleParams& par,
                                          double lambda_final) {
  const InnerLoopCommand<double> k2 = k2_pos(x, cfg, par);

  const WrenchRateInput closure{k2.thrust_rate, Eigen::Vector3d::Zero()};
  const AugmentedStateRate dx = state_derivative(x, closure, par);
  const auto lifted = seed_state(x, dx);
  const InnerLoopCommand<Dual<double>> k2_lift = k2_pos(lifted, cfg, par);
  const Eigen::Vector2d k2_xy_rate(k2_lift.omega_xy[0].dot, k2_lift.omega_xy[1].dot);

  const Eigen::Vector3d f_res = x.force() - k1_pos(x, cfg, par);
  const Eigen::Vector2d chain_term = -(cfg.mu_pos[2] / cfg.mu_pos[1]) *
                                     (-x.thrust * (x.attitude * tilt_map()).transpose() * f_res);
  const Eigen::Vector2d damping =
      0.5 * lambda_final * (x.omega_xy() - k2.omega_xy);
  const Eigen::Vector2d accel =
      -omega_xy_drift(x, par) + chain_term + k2_xy_rate - damping;
  return {k2.thrust_rate, torque_from_omega_xy_accel(accel, par)};
}

}  // namespace barriers

}  // namespace mcsafe
