#include "mcsafe/sim.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace mcsafe {

namespace {

using StateVec = Eigen::Matrix<double, 19, 1>;

StateVec pack(const AugmentedState& x) {
  StateVec v;
  v.segment<3>(0) = x.position;
  v.segment<3>(3) = x.velocity;
  v.segment<9>(6) = Eigen::Map<const Eigen::Matrix<double, 9, 1>>(x.attitude.data());
  v.segment<3>(15) = x.angular_velocity;
  v[18] = x.thrust;
  return v;
}

AugmentedState unpack(const StateVec& v) {
  AugmentedState x;
  x.position = v.segment<3>(0);
  x.velocity = v.segment<3>(3);
  x.attitude = Eigen::Map<const Eigen::Matrix3d>(v.segment<9>(6).data());
  x.angular_velocity = v.segment<3>(15);
  x.thrust = v[18];
  return x;
}

StateVec pack_rate(const AugmentedStateRate& d) {
  StateVec v;
  v.segment<3>(0) = d.position;
  v.segment<3>(3) = d.velocity;
  v.segment<9>(6) = Eigen::Map<const Eigen::Matrix<double, 9, 1>>(d.attitude.data());
  v.segment<3>(15) = d.angular_velocity;
  v[18] = d.thrust;
  return v;
}

/// Augmented dynamics with the commanded wrench routed through allocation and
/// rotor saturation. Identical to state_derivative whenever no rotor clamps
/// (B B_pinv = I), which keeps the pure-model fixed points exact.
AugmentedStateRate allocated_derivative(const AugmentedState& x, const WrenchRateInput& nu,
                                        const VehicleParams& par) {
  Eigen::Vector4d wrench;
  wrench << x.thrust, nu.torque;
  const SaturationResult sat = saturate(allocate(wrench, par), par);
  const double thrust_eff = sat.effective_wrench[0];
  const Eigen::Vector3d torque_eff = sat.effective_wrench.tail<3>();

  AugmentedStateRate d;
  d.position = x.velocity;
  d.velocity = par.gravity * Eigen::Vector3d::UnitZ() -
               (thrust_eff / par.mass) * x.body_z_axis();
  d.attitude = x.attitude * skew<double>(x.angular_velocity);
  d.angular_velocity = par.inertia.inverse() *
                       (torque_eff - x.angular_velocity.cross(par.inertia * x.angular_velocity));
  d.thrust = nu.thrust_rate;
  return d;
}

template <class Derivative>
AugmentedState rk4_step(const AugmentedState& x, const WrenchRateInput& nu, double dt,
                        const VehicleParams& par, Derivative&& f) {
  const StateVec y0 = pack(x);
  const StateVec k1 = pack_rate(f(x, nu, par));
  const StateVec k2 = pack_rate(f(unpack(y0 + 0.5 * dt * k1), nu, par));
  const StateVec k3 = pack_rate(f(unpack(y0 + 0.5 * dt * k2), nu, par));
  const StateVec k4 = pack_rate(f(unpack(y0 + dt * k3), nu, par));
  AugmentedState next = unpack(y0 + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
  next.attitude = polar_rotation(next.attitude);
  return next;
}

BarrierSnapshot snapshot_or_nan(const AugmentedState& x, const SafetyConfig& cfg,
                                const VehicleParams& par) {
  BarrierSnapshot s;
  s.h_omega = barriers::h_omega(x, cfg);
  s.h0_tilt = barriers::h0_tilt(x, cfg);
  s.h1_tilt = barriers::h1_tilt(x, cfg);
  s.h0_vel = barriers::h0_vel(x, cfg);
  s.h0_pos = barriers::h0_pos(x, cfg);
  try {
    s.h_vel = barriers::h_vel(x, cfg, par);
    s.h_pos = barriers::h_pos(x, cfg, par);
  } catch (const SingularThrust&) {
    s.h_vel = std::numeric_limits<double>::quiet_NaN();
    s.h_pos = std::numeric_limits<double>::quiet_NaN();
  }
  return s;
}

template <class Get>
FamilyReport scan_family(const std::vector<TrajectoryRecord>& records, Get&& get) {
  FamilyReport family;
  bool in_violation = false;
  bool first = true;
  for (const TrajectoryRecord& rec : records) {
    const double value = get(rec);
    if (first || value < family.min_value) {
      family.min_value = value;
      family.min_time = rec.t;
    }
    first = false;
    if (value < 0.0) {
      if (!in_violation) {
        family.violations.push_back({rec.t, rec.t});
        in_violation = true;
      } else {
        family.violations.back().end = rec.t;
      }
    } else {
      in_violation = false;
    }
  }
  return family;
}

}  // namespace

Eigen::Matrix3d polar_rotation(const Eigen::Matrix3d& m) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d u = svd.matrixU();
  if ((u * svd.matrixV().transpose()).determinant() < 0.0) {
    u.col(2) *= -1.0;
  }
  return u * svd.matrixV().transpose();
}

bool SafetyReport::any_violation(double tolerance) const {
  return angular_velocity.min_value < -tolerance || tilt.min_value < -tolerance ||
         velocity.min_value < -tolerance || position.min_value < -tolerance;
}

AugmentedState step(const AugmentedState& x, const WrenchRateInput& nu_held, double dt,
                    const VehicleParams& par) {
  const AugmentedState next = rk4_step(
      x, nu_held, dt, par,
      [](const AugmentedState& s, const WrenchRateInput& n, const VehicleParams& p) {
        return state_derivative(s, n, p);
      });
  if (!pack(next).allFinite()) {
    throw IntegrationDiverged(0);
  }
  return next;
}

SimResult run(const Scenario& scenario) {
  scenario.validate();
  const VehicleParams& par = scenario.vehicle;
  const SafetyConfig& cfg = scenario.safety;

  NominalController nominal(scenario.reference, scenario.gains);
  const long n_steps = std::lround(scenario.duration / scenario.dt);

  SimResult result;
  result.records.reserve(n_steps + 1);
  AugmentedState x = scenario.initial_state;

  double time_sum_us = 0.0;
  double time_max_us = 0.0;

  for (long k = 0; k <= n_steps; ++k) {
    const double t = k * scenario.dt;
    const WrenchRateInput k_d = nominal(x, t, par);

    TrajectoryRecord rec;
    rec.t = t;
    rec.position = x.position;
    rec.velocity = x.velocity;
    rec.euler_zyx = rotation_to_euler_zyx(x.attitude);
    rec.angular_velocity = x.angular_velocity;
    rec.thrust = x.thrust;

    if (scenario.filter_enabled) {
      const auto t0 = std::chrono::steady_clock::now();
      FilterResult fr;
      try {
        fr = filter(x, k_d, cfg, par);
      } catch (const SingularThrust& e) {
        throw SingularThrust(e.thrust, k);
      }
      const auto t1 = std::chrono::steady_clock::now();
      rec.filter_time_us =
          std::chrono::duration<double, std::micro>(t1 - t0).count();
      rec.commanded = fr.input;
      rec.barriers = fr.barriers;
      rec.qp_status = fr.qp.status;
      rec.qp_active_set = fr.qp.active_set;
      rec.qp_slack = fr.qp.slack_used;
      time_sum_us += rec.filter_time_us;
      time_max_us = std::max(time_max_us, rec.filter_time_us);
    } else {
      rec.commanded = k_d;
      rec.barriers = snapshot_or_nan(x, cfg, par);
      rec.qp_status = QpStatus::Optimal;
    }

    Eigen::Vector4d wrench;
    wrench << x.thrust, rec.commanded.torque;
    const SaturationResult sat = saturate(allocate(wrench, par), par);
    rec.rotor_thrusts = sat.rotor_thrusts;
    rec.saturated = sat.saturated;

    result.records.push_back(std::move(rec));

    if (k < n_steps) {
      x = rk4_step(x, result.records.back().commanded, scenario.dt, par,
                   allocated_derivative);
      if (!pack(x).allFinite()) {
        throw IntegrationDiverged(k);
      }
    }
  }

  // Aggregate the report.
  SafetyReport& rep = result.report;
  rep.steps = n_steps;
  rep.angular_velocity =
      scan_family(result.records, [](const TrajectoryRecord& r) { return r.barriers.h_omega; });
  rep.tilt =
      scan_family(result.records, [](const TrajectoryRecord& r) { return r.barriers.h0_tilt; });
  rep.velocity =
      scan_family(result.records, [](const TrajectoryRecord& r) { return r.barriers.h0_vel; });
  rep.position =
      scan_family(result.records, [](const TrajectoryRecord& r) { return r.barriers.h0_pos; });
  for (const TrajectoryRecord& rec : result.records) {
    if (rec.qp_status == QpStatus::Relaxed) ++rep.relaxed_steps;
    if (rec.saturated) ++rep.saturated_steps;
  }
  const long n_records = static_cast<long>(result.records.size());
  rep.filter_time_mean_us = scenario.filter_enabled ? time_sum_us / n_records : 0.0;
  rep.filter_time_max_us = time_max_us;
  return result;
}

}  // namespace mcsafe
