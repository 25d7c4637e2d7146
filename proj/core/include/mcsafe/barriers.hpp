#pragma once

#include <array>
#include <string_view>
#include <utility>

#include <Eigen/Dense>

#include "mcsafe/dynamics.hpp"
#include "mcsafe/errors.hpp"
#include "mcsafe/types.hpp"

namespace mcsafe {

/// All barrier parameters. Quadratic weights are stored as diagonals.
struct SafetyConfig {
  Eigen::Vector3d P_omega_diag = Eigen::Vector3d::Zero();  ///< [1/(rad/s)^2]
  Eigen::Vector3d P_vel_diag = Eigen::Vector3d::Zero();    ///< [1/(m/s)^2]
  Eigen::Vector3d P_pos_diag = Eigen::Vector3d::Zero();    ///< [1/m^2]
  Eigen::Vector3d fence_center = Eigen::Vector3d::Zero();  ///< p_d [m]
  Eigen::Vector3d tilt_axis_des = Eigen::Vector3d(0, 0, 1);  ///< desired z_B, unit
  double tilt_max = 0.0;  ///< max tilt angle [rad], in (0, pi)

  // Linear class-K slopes [1/s].
  double a_omega = 1.0;
  double a1_tilt = 1.0;
  double a2_tilt = 1.0;
  double a0_vel = 1.0;
  double a0_pos = 1.0;

  // Backstepping weights and damping gains.
  std::array<double, 2> mu_vel{1.0, 1.0};
  std::array<double, 3> mu_pos{1.0, 1.0, 1.0};
  double lambda_vel = 1.0;
  std::array<double, 2> lambda_pos{1.0, 1.0};

  // Virtual-controller gains [1/s]; must dominate the matching slope.
  double c_vel = 1.0;
  double c_pos = 1.0;

  double thrust_min = 0.0;  ///< singularity floor for |T| [N]

  /// Throws ConfigError on violated invariants.
  void validate() const;
};

enum class BarrierFamily { AngularVelocity, Tilt, Velocity, Position };

std::string_view to_string(BarrierFamily family);

/// One safety inequality, affine in nu_a = [T_dot, M]: coeff . nu + offset >= 0.
struct AffineConstraintRow {
  Eigen::Vector4d coeff = Eigen::Vector4d::Zero();
  double offset = 0.0;
  BarrierFamily family{};

  double value(const Eigen::Vector4d& nu) const { return coeff.dot(nu) + offset; }
};

/// Barrier values at one state, for logging and reporting.
struct BarrierSnapshot {
  double h_omega{};
  double h0_tilt{};
  double h1_tilt{};
  double h0_vel{};
  double h_vel{};
  double h0_pos{};
  double h_pos{};
};

namespace barriers {

namespace detail {

template <class S>
void require_thrust(const S& thrust, const SafetyConfig& cfg) {
  const double t = value_of(thrust);
  if (std::abs(t) < cfg.thrust_min) {
    throw SingularThrust(t);
  }
}

template <class S>
Vec3<S> diag_times(const Eigen::Vector3d& diag, const Vec3<S>& v) {
  return Vec3<S>(S(diag[0]) * v[0], S(diag[1]) * v[1], S(diag[2]) * v[2]);
}

/// v' diag(d) v
template <class S>
S quad_diag(const Eigen::Vector3d& diag, const Vec3<S>& v) {
  return v.dot(diag_times(diag, v));
}

/// Solves g y = rhs with g = [-T R A, -z_B], exploiting g = -R K with
/// K = [[0,T,0],[-T,0,0],[0,0,1]]. Valid on R'R = I; |det g| = T^2.
template <class S>
Vec3<S> solve_tilt_thrust_system(const AugmentedStateT<S>& x, const Vec3<S>& rhs) {
  const Vec3<S> w = x.attitude.transpose() * rhs;
  return Vec3<S>(w[1] / x.thrust, -w[0] / x.thrust, -w[2]);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Angular-velocity barrier (relative degree one).

template <class S>
S h_omega(const AugmentedStateT<S>& x, const SafetyConfig& cfg) {
  return S(1) - detail::quad_diag(cfg.P_omega_diag, x.angular_velocity);
}

// ---------------------------------------------------------------------------
// Thrust-direction (tilt) barrier, relative degree two.

template <class S>
S h0_tilt(const AugmentedStateT<S>& x, const SafetyConfig& cfg) {
  const Vec3<S> axis_des = cfg.tilt_axis_des.cast<S>();
  return x.body_z_axis().dot(axis_des) - S(std::cos(cfg.tilt_max));
}

template <class S>
S h1_tilt(const AugmentedStateT<S>& x, const SafetyConfig& cfg) {
  const Vec3<S> axis_des = cfg.tilt_axis_des.cast<S>();
  const Vec3<S> z_axis_rate = x.attitude * Vec3<S>(tilt_map().cast<S>() * x.omega_xy());
  return z_axis_rate.dot(axis_des) + S(cfg.a1_tilt) * h0_tilt(x, cfg);
}

// ---------------------------------------------------------------------------
// Velocity chain: v -> f -> w_xy with inputs (T_dot, M).

template <class S>
S h0_vel(const AugmentedStateT<S>& x, const SafetyConfig& cfg) {
  return S(1) - detail::quad_diag(cfg.P_vel_diag, x.velocity);
}

/// Virtual force command k0 = -m (g e3 + c_v v / 2).
template <class S>
Vec3<S> k0_vel(const AugmentedStateT<S>& x, const SafetyConfig& cfg,
               const VehicleParams& par) {
  return Vec3<S>(-S(par.mass) *
                 Vec3<S>(S(par.gravity) * unit_z<S>() + S(0.5 * cfg.c_vel) * x.velocity));
}

/// Desired (w_xy, T_dot) produced by one backstepping level.
template <class S>
struct InnerLoopCommand {
  Vec2<S> omega_xy;
  S thrust_rate;
};

/// First backstepping level of the velocity chain. Throws SingularThrust
/// below the thrust floor.
template <class S>
InnerLoopCommand<S> k1_vel(const AugmentedStateT<S>& x, const SafetyConfig& cfg,
                           const VehicleParams& par) {
  detail::require_thrust(x.thrust, cfg);
  const S m = S(par.mass);
  const Vec3<S> f = x.force();
  // mu-weighted barrier gradient through g0 = I/m.
  const Vec3<S> grad_term = Vec3<S>(-S(2.0 * cfg.mu_vel[0]) / m *
                                    detail::diag_times(cfg.P_vel_diag, x.velocity));
  // d/dt k0 along the flow (v_dot = g e3 + f/m carries no input).
  const Vec3<S> k0_rate =
      Vec3<S>(-S(0.5 * cfg.c_vel) * m * Vec3<S>(S(par.gravity) * unit_z<S>() + f / m));
  const Vec3<S> damping = S(0.5 * cfg.lambda_vel) * Vec3<S>(f - k0_vel(x, cfg, par));
  const Vec3<S> y =
      detail::solve_tilt_thrust_system(x, Vec3<S>(grad_term + k0_rate - damping));
  return {y.template head<2>(), y[2]};
}

/// Composite velocity barrier: h0 minus the weighted backstepping residuals.
template <class S>
S h_vel(const AugmentedStateT<S>& x, const SafetyConfig& cfg, const VehicleParams& par) {
  const Vec3<S> f_res = x.force() - k0_vel(x, cfg, par);
  const Vec2<S> w_res = x.omega_xy() - k1_vel(x, cfg, par).omega_xy;
  return h0_vel(x, cfg) - f_res.squaredNorm() / S(2.0 * cfg.mu_vel[0]) -
         w_res.squaredNorm() / S(2.0 * cfg.mu_vel[1]);
}

// ---------------------------------------------------------------------------
// Position chain: p -> v -> f -> w_xy with inputs (T_dot, M).

template <class S>
S h0_pos(const AugmentedStateT<S>& x, const SafetyConfig& cfg) {
  const Vec3<S> e = x.position - cfg.fence_center.cast<S>();
  return S(1) - detail::quad_diag(cfg.P_pos_diag, e);
}

/// Virtual velocity command k0 = -c_p (p - p_d) / 2.
template <class S>
Vec3<S> k0_pos(const AugmentedStateT<S>& x, const SafetyConfig& cfg) {
  return Vec3<S>(-S(0.5 * cfg.c_pos) * Vec3<S>(x.position - cfg.fence_center.cast<S>()));
}

/// Virtual force command (second level; g1 = I/m inverts exactly).
template <class S>
Vec3<S> k1_pos(const AugmentedStateT<S>& x, const SafetyConfig& cfg,
               const VehicleParams& par) {
  const Vec3<S> e = x.position - cfg.fence_center.cast<S>();
  const Vec3<S> grad_term =
      Vec3<S>(-S(2.0 * cfg.mu_pos[0]) * detail::diag_times(cfg.P_pos_diag, e));
  const Vec3<S> k0_rate = Vec3<S>(-S(0.5 * cfg.c_pos) * x.velocity);
  const Vec3<S> damping =
      S(0.5 * cfg.lambda_pos[0]) * Vec3<S>(x.velocity - k0_pos(x, cfg));
  return Vec3<S>(S(par.mass) * Vec3<S>(-S(par.gravity) * unit_z<S>() + grad_term +
                                       k0_rate - damping));
}

/// Exact d/dt of k1_pos along the flow (p_dot and v_dot carry no input).
template <class S>
Vec3<S> k1_pos_rate(const AugmentedStateT<S>& x, const SafetyConfig& cfg,
                    const VehicleParams& par) {
  AugmentedStateRateT<S> drift;
  drift.position = x.velocity;
  drift.velocity = S(par.gravity) * unit_z<S>() + x.force() / S(par.mass);
  drift.attitude = Mat3<S>::Zero();        // k1_pos does not read R, w, T;
  drift.angular_velocity = Vec3<S>::Zero();  // seed only the used coordinates
  drift.thrust = S(0);
  const AugmentedStateT<Dual<S>> lifted = seed_state(x, drift);
  const Vec3<Dual<S>> k1 = k1_pos(lifted, cfg, par);
  return Vec3<S>(k1[0].dot, k1[1].dot, k1[2].dot);
}

/// Third backstepping level of the position chain: desired (w_xy, T_dot).
template <class S>
InnerLoopCommand<S> k2_pos(const AugmentedStateT<S>& x, const SafetyConfig& cfg,
                           const VehicleParams& par) {
  detail::require_thrust(x.thrust, cfg);
  const Vec3<S> v_res = x.velocity - k0_pos(x, cfg);
  const Vec3<S> chain_term =
      -S(cfg.mu_pos[1] / cfg.mu_pos[0]) / S(par.mass) * v_res;
  const Vec3<S> damping =
      S(0.5 * cfg.lambda_pos[1]) * Vec3<S>(x.force() - k1_pos(x, cfg, par));
  const Vec3<S> rhs = chain_term + k1_pos_rate(x, cfg, par) - damping;
  const Vec3<S> y = detail::solve_tilt_thrust_system(x, rhs);
  return {y.template head<2>(), y[2]};
}

/// Composite position barrier: h0 minus the three weighted residuals.
template <class S>
S h_pos(const AugmentedStateT<S>& x, const SafetyConfig& cfg, const VehicleParams& par) {
  const Vec3<S> v_res = x.velocity - k0_pos(x, cfg);
  const Vec3<S> f_res = x.force() - k1_pos(x, cfg, par);
  const Vec2<S> w_res = x.omega_xy() - k2_pos(x, cfg, par).omega_xy;
  return h0_pos(x, cfg) - v_res.squaredNorm() / S(2.0 * cfg.mu_pos[0]) -
         f_res.squaredNorm() / S(2.0 * cfg.mu_pos[1]) -
         w_res.squaredNorm() / S(2.0 * cfg.mu_pos[2]);
}

// ---------------------------------------------------------------------------
// Flow derivatives and affine constraint rows.

/// Value of fn at x and its time derivative along state_derivative(x, nu).
template <class F>
std::pair<double, double> value_and_flow_derivative(F&& fn, const AugmentedState& x,
                                                    const WrenchRateInput& nu,
                                                    const VehicleParams& par) {
  const AugmentedStateRate dx = state_derivative(x, nu, par);
  const Dual<double> r = fn(seed_state(x, dx));
  return {r.val, r.dot};
}

AffineConstraintRow row_omega(const AugmentedState& x, const SafetyConfig& cfg,
                              const VehicleParams& par);
AffineConstraintRow row_tilt(const AugmentedState& x, const SafetyConfig& cfg,
                             const VehicleParams& par);
AffineConstraintRow row_vel(const AugmentedState& x, const SafetyConfig& cfg,
                            const VehicleParams& par);
AffineConstraintRow row_pos(const AugmentedState& x, const SafetyConfig& cfg,
                            const VehicleParams& par);

/// All four rows in family order (angular velocity, tilt, velocity, position).
std::array<AffineConstraintRow, 4> all_rows(const AugmentedState& x,
                                            const SafetyConfig& cfg,
                                            const VehicleParams& par);

BarrierSnapshot snapshot(const AugmentedState& x, const SafetyConfig& cfg,
                         const VehicleParams& par);

// ---------------------------------------------------------------------------
// Full-input backstepping controllers. These extend the recursion down to the
// torque level and serve as constructive feasibility witnesses for the
// velocity and position constraints.

WrenchRateInput velocity_chain_controller(const AugmentedState& x, const SafetyConfig& cfg,
                                          const VehicleParams& par, double lambda_final);
WrenchRateInput position_chain_controller(const AugmentedState& x, const SafetyConfig& cfg,
                                          const VehicleParams& par, double lambda_final);

}  // namespace barriers

}  // namespace mcsafe
