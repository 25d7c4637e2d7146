#include "mcsafe/io.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace mcsafe {

namespace {

constexpr double kRadToDeg = 180.0 / M_PI;

nlohmann::json family_to_json(const FamilyReport& family) {
  nlohmann::json j;
  j["min_value"] = family.min_value;
  j["min_time"] = family.min_time;
  nlohmann::json intervals = nlohmann::json::array();
  for (const ViolationInterval& v : family.violations) {
    intervals.push_back({v.begin, v.end});
  }
  j["violation_intervals"] = intervals;
  return j;
}

std::string join_active_set(const std::vector<int>& active) {
  std::string s;
  for (size_t i = 0; i < active.size(); ++i) {
    if (i > 0) s += ';';
    s += std::to_string(active[i]);
  }
  return s;
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const SimResult& result) {
  const int n_rotors =
      result.records.empty() ? 0 : static_cast<int>(result.records.front().rotor_thrusts.size());

  out << "# columns: time [s]; position x/y/z [m]; velocity x/y/z [m/s]; "
         "euler roll/pitch/yaw (ZYX) [deg]; angular velocity x/y/z [rad/s]; "
         "thrust [N]; commanded thrust rate [N/s]; commanded torque x/y/z [N m]; "
         "rotor thrusts u1..u" << n_rotors << " [N] (post-saturation); "
         "barrier values h_omega, h0_tilt, h1_tilt, h0_vel, h_vel, h0_pos, h_pos; "
         "qp_status; qp_active_set (';'-joined row indices); qp_slack; "
         "filter_time_us; saturated\n";

  out << "t,px,py,pz,vx,vy,vz,roll_deg,pitch_deg,yaw_deg,wx,wy,wz,thrust,"
         "thrust_rate_cmd,Mx,My,Mz";
  for (int i = 1; i <= n_rotors; ++i) out << ",u" << i;
  out << ",h_omega,h0_tilt,h1_tilt,h0_vel,h_vel,h0_pos,h_pos"
         ",qp_status,qp_active_set,qp_slack,filter_time_us,saturated\n";

  out << std::setprecision(17);
  for (const TrajectoryRecord& r : result.records) {
    out << r.t << ',' << r.position.x() << ',' << r.position.y() << ','
        << r.position.z() << ',' << r.velocity.x() << ',' << r.velocity.y() << ','
        << r.velocity.z() << ',' << r.euler_zyx.x() * kRadToDeg << ','
        << r.euler_zyx.y() * kRadToDeg << ',' << r.euler_zyx.z() * kRadToDeg << ','
        << r.angular_velocity.x() << ',' << r.angular_velocity.y() << ','
        << r.angular_velocity.z() << ',' << r.thrust << ',' << r.commanded.thrust_rate
        << ',' << r.commanded.torque.x() << ',' << r.commanded.torque.y() << ','
        << r.commanded.torque.z();
    for (int i = 0; i < n_rotors; ++i) out << ',' << r.rotor_thrusts[i];
    out << ',' << r.barriers.h_omega << ',' << r.barriers.h0_tilt << ','
        << r.barriers.h1_tilt << ',' << r.barriers.h0_vel << ',' << r.barriers.h_vel
        << ',' << r.barriers.h0_pos << ',' << r.barriers.h_pos << ','
        << to_string(r.qp_status) << ',' << join_active_set(r.qp_active_set) << ','
        << r.qp_slack << ',' << r.filter_time_us << ',' << (r.saturated ? 1 : 0)
        << '\n';
  }
}

nlohmann::json report_to_json(const SafetyReport& report, const Scenario& scenario) {
  nlohmann::json j;
  j["scenario"] = scenario.name;
  j["filter_enabled"] = scenario.filter_enabled;
  j["dt"] = scenario.dt;
  j["duration"] = scenario.duration;
  j["steps"] = report.steps;
  j["min_barriers"] = {
      {"h_omega", family_to_json(report.angular_velocity)},
      {"h0_tilt", family_to_json(report.tilt)},
      {"h0_vel", family_to_json(report.velocity)},
      {"h0_pos", family_to_json(report.position)},
  };
  j["relaxed_steps"] = report.relaxed_steps;
  j["saturated_steps"] = report.saturated_steps;
  j["filter_time_us"] = {{"mean", report.filter_time_mean_us},
                         {"max", report.filter_time_max_us}};
  return j;
}

nlohmann::json compare_to_json(const SafetyReport& filtered, const SafetyReport& nominal,
                               const Scenario& scenario) {
  nlohmann::json j;
  j["scenario"] = scenario.name;
  Scenario annotated = scenario;
  annotated.filter_enabled = true;
  j["filtered"] = report_to_json(filtered, annotated);
  annotated.filter_enabled = false;
  j["nominal"] = report_to_json(nominal, annotated);
  j["min_h_delta"] = {
      {"h_omega", filtered.angular_velocity.min_value - nominal.angular_velocity.min_value},
      {"h0_tilt", filtered.tilt.min_value - nominal.tilt.min_value},
      {"h0_vel", filtered.velocity.min_value - nominal.velocity.min_value},
      {"h0_pos", filtered.position.min_value - nominal.position.min_value},
  };
  return j;
}

}  // namespace mcsafe
