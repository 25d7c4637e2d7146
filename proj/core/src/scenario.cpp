#include "mcsafe/scenario.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

namespace mcsafe {

namespace {

constexpr double kDegToRad = M_PI / 180.0;

Eigen::Vector3d to_vec3(const nlohmann::json& j, const std::string& key) {
  const auto& arr = j.at(key);
  if (!arr.is_array() || arr.size() != 3) {
    throw ConfigError("field '" + key + "' must be a 3-element array");
  }
  return {arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>()};
}

}  // namespace

void Scenario::validate() const {
  if (!(dt > 0.0)) {
    throw ConfigError("control period dt must be positive");
  }
  if (!(duration >= 0.0)) {
    throw ConfigError("duration must be non-negative");
  }
  vehicle.validate();
  safety.validate();
  gains.validate();

  const Eigen::Matrix3d& R = initial_state.attitude;
  if ((R.transpose() * R - Eigen::Matrix3d::Identity()).norm() > 1e-9 ||
      std::abs(R.determinant() - 1.0) > 1e-9) {
    throw ConfigError("initial attitude must be a rotation matrix");
  }

  if (filter_enabled) {
    // Forward invariance needs the initial state inside every safe set,
    // including the composite backstepping barriers.
    auto inside = [](double h, const char* what) {
      if (!(h >= 0.0)) {
        throw ConfigError(std::string("initial state violates the ") + what +
                          " safe set (h = " + std::to_string(h) + ")");
      }
    };
    inside(barriers::h_omega(initial_state, safety), "angular-velocity");
    inside(barriers::h0_tilt(initial_state, safety), "tilt");
    inside(barriers::h1_tilt(initial_state, safety), "tilt-rate");
    inside(barriers::h0_vel(initial_state, safety), "velocity");
    inside(barriers::h0_pos(initial_state, safety), "position");
    inside(barriers::h_vel(initial_state, safety, vehicle), "composite velocity");
    inside(barriers::h_pos(initial_state, safety, vehicle), "composite position");
  }
}

Scenario paper_scenario() {
  Scenario sc;
  sc.name = "paper";

  VehicleParams& par = sc.vehicle;
  par.mass = 4.34;
  par.inertia = Eigen::Vector3d(0.0820, 0.0845, 0.1377).asDiagonal();
  par.gravity = 9.81;
  par.B = hexacopter_x_effectiveness(0.315, 8.004e-4);
  par.rotor_thrust_max = 0.6371 * par.mass * par.gravity;

  SafetyConfig& cfg = sc.safety;
  const double omega_max = 360.0 * kDegToRad;
  cfg.P_omega_diag.setConstant(1.0 / (omega_max * omega_max));
  cfg.P_vel_diag.setConstant(1.0 / (2.0 * 2.0));
  cfg.P_pos_diag.setConstant(1.0 / (3.0 * 3.0));
  cfg.fence_center = Eigen::Vector3d(0.0, 0.0, -5.0);
  cfg.tilt_axis_des = Eigen::Vector3d(0.0, 0.0, 1.0);
  cfg.tilt_max = 30.0 * kDegToRad;
  cfg.a_omega = 2.0;
  cfg.a1_tilt = 10.0;
  cfg.a2_tilt = 10.0;
  cfg.a0_vel = 0.5;
  cfg.a0_pos = 0.5;
  cfg.mu_vel = {400.0, 30.0};
  cfg.mu_pos = {6.0, 200.0, 24.0};
  cfg.lambda_vel = 1.0;
  cfg.lambda_pos = {1.0, 1.0};
  cfg.c_vel = 0.5;
  cfg.c_pos = 0.5;
  cfg.thrust_min = 0.05 * par.mass * par.gravity;

  sc.gains = NominalGains{};
  sc.reference = ReferenceTrajectory::orbit(Eigen::Vector3d(0.0, 0.0, -5.0), 2.5, 0.5,
                                            2.5, 0.25, 0.0);

  AugmentedState& x0 = sc.initial_state;
  x0.position = Eigen::Vector3d(0.0, 0.0, -5.0);
  x0.velocity = Eigen::Vector3d(0.0, 1.25, 0.625);
  x0.attitude = euler_zyx_to_rotation(-15.0 * kDegToRad, 15.0 * kDegToRad,
                                      90.0 * kDegToRad);
  x0.angular_velocity = Eigen::Vector3d(15.0, 15.0, 0.0) * kDegToRad;
  x0.thrust = par.mass * par.gravity;

  sc.duration = 20.0;
  sc.dt = 0.005;
  sc.filter_enabled = true;
  sc.seed = 0;
  return sc;
}

Scenario load_scenario(const std::filesystem::path& config_path) {
  std::ifstream in(config_path);
  if (!in) {
    throw ConfigError("cannot open config file: " + config_path.string());
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("cannot parse config file " + config_path.string() + ": " +
                      e.what());
  }

  Scenario sc;
  try {
    sc.name = j.value("name", config_path.stem().string());

    const auto& jv = j.at("vehicle");
    sc.vehicle.mass = jv.at("mass").get<double>();
    sc.vehicle.inertia = to_vec3(jv, "inertia_diag").asDiagonal();
    sc.vehicle.gravity = jv.value("gravity", kGravityDefault);
    const auto& ja = jv.at("allocation");
    const std::string layout = ja.at("layout").get<std::string>();
    if (layout != "hexacopter_x") {
      throw ConfigError("unsupported allocation layout: " + layout);
    }
    sc.vehicle.B = hexacopter_x_effectiveness(ja.at("arm_length").get<double>(),
                                              ja.at("torque_coeff").get<double>());
    const double mg = sc.vehicle.mass * sc.vehicle.gravity;
    if (jv.contains("rotor_thrust_max")) {
      sc.vehicle.rotor_thrust_max = jv.at("rotor_thrust_max").get<double>();
    } else {
      sc.vehicle.rotor_thrust_max = jv.at("rotor_thrust_max_factor_mg").get<double>() * mg;
    }

    const auto& js = j.at("safety");
    SafetyConfig& cfg = sc.safety;
    const double omega_max = js.at("omega_max_deg_s").get<double>() * kDegToRad;
    const double vel_max = js.at("vel_max").get<double>();
    const double pos_max = js.at("pos_max").get<double>();
    cfg.P_omega_diag.setConstant(1.0 / (omega_max * omega_max));
    cfg.P_vel_diag.setConstant(1.0 / (vel_max * vel_max));
    cfg.P_pos_diag.setConstant(1.0 / (pos_max * pos_max));
    cfg.fence_center = to_vec3(js, "fence_center");
    cfg.tilt_axis_des = to_vec3(js, "tilt_axis_des").normalized();
    cfg.tilt_max = js.at("tilt_max_deg").get<double>() * kDegToRad;
    const auto& slopes = js.at("slopes");
    cfg.a_omega = slopes.at("a_omega").get<double>();
    cfg.a1_tilt = slopes.at("a1_tilt").get<double>();
    cfg.a2_tilt = slopes.at("a2_tilt").get<double>();
    cfg.a0_vel = slopes.at("a0_vel").get<double>();
    cfg.a0_pos = slopes.at("a0_pos").get<double>();
    const auto& mu_vel = js.at("mu_vel");
    const auto& mu_pos = js.at("mu_pos");
    const auto& lambda_pos = js.at("lambda_pos");
    if (mu_vel.size() != 2 || mu_pos.size() != 3 || lambda_pos.size() != 2) {
      throw ConfigError("mu_vel, mu_pos, lambda_pos must have sizes 2, 3, 2");
    }
    cfg.mu_vel = {mu_vel[0].get<double>(), mu_vel[1].get<double>()};
    cfg.mu_pos = {mu_pos[0].get<double>(), mu_pos[1].get<double>(),
                  mu_pos[2].get<double>()};
    cfg.lambda_vel = js.at("lambda_vel").get<double>();
    cfg.lambda_pos = {lambda_pos[0].get<double>(), lambda_pos[1].get<double>()};
    cfg.c_vel = js.at("c_vel").get<double>();
    cfg.c_pos = js.at("c_pos").get<double>();
    cfg.thrust_min = js.at("thrust_min_factor_mg").get<double>() * mg;

    const auto& jn = j.at("nominal");
    sc.gains.position = jn.at("position").get<double>();
    sc.gains.velocity = jn.at("velocity").get<double>();
    sc.gains.thrust = jn.at("thrust").get<double>();
    sc.gains.attitude = jn.at("attitude").get<double>();
    sc.gains.rate = jn.at("rate").get<double>();
    sc.gains.yaw_rate = jn.at("yaw_rate").get<double>();

    const auto& jr = j.at("reference");
    const std::string type = jr.at("type").get<std::string>();
    if (type == "hover") {
      sc.reference = ReferenceTrajectory::hover(to_vec3(jr, "point"),
                                                jr.value("yaw_rate", 0.0));
    } else if (type == "orbit") {
      sc.reference = ReferenceTrajectory::orbit(
          to_vec3(jr, "center"), jr.at("radius").get<double>(),
          jr.at("angular_rate").get<double>(),
          jr.at("vertical_amplitude").get<double>(),
          jr.at("vertical_rate").get<double>(), jr.value("yaw_rate", 0.0));
    } else {
      throw ConfigError("unsupported reference type: " + type);
    }

    const auto& ji = j.at("initial_state");
    sc.initial_state.position = to_vec3(ji, "position");
    sc.initial_state.velocity = to_vec3(ji, "velocity");
    const Eigen::Vector3d euler = to_vec3(ji, "euler_zyx_deg") * kDegToRad;
    sc.initial_state.attitude = euler_zyx_to_rotation(euler[0], euler[1], euler[2]);
    sc.initial_state.angular_velocity = to_vec3(ji, "omega_deg_s") * kDegToRad;
    const auto& jt = ji.at("thrust");
    if (jt.is_string() && jt.get<std::string>() == "hover") {
      sc.initial_state.thrust = mg;
    } else {
      sc.initial_state.thrust = jt.get<double>();
    }

    const auto& jm = j.at("sim");
    sc.duration = jm.at("duration").get<double>();
    sc.dt = jm.at("dt").get<double>();
    sc.filter_enabled = jm.value("filter", true);
    sc.seed = jm.value("seed", uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("invalid config " + config_path.string() + ": " + e.what());
  }

  sc.validate();
  return sc;
}

}  // namespace mcsafe
