#include <doctest.h>

#include <fstream>
#include <sstream>

#include "mcsafe/io.hpp"
#include "mcsafe/scenario.hpp"
#include "mcsafe/sim.hpp"
#include "support/mini_schema.hpp"

using namespace mcsafe;

namespace {

const char* scenario_path() { return MCSAFE_SCENARIO_DIR "/scenario_paper.json"; }
const char* schema_path() { return MCSAFE_SCHEMA_DIR "/report.schema.json"; }

}  // namespace

TEST_CASE("the shipped scenario file matches the built-in scenario") {
  const Scenario file = load_scenario(scenario_path());
  const Scenario builtin = paper_scenario();

  CHECK(file.name == builtin.name);
  CHECK(file.duration == builtin.duration);
  CHECK(file.dt == builtin.dt);
  CHECK(file.filter_enabled == builtin.filter_enabled);

  CHECK(file.vehicle.mass == builtin.vehicle.mass);
  CHECK((file.vehicle.inertia - builtin.vehicle.inertia).norm() == 0.0);
  CHECK((file.vehicle.B - builtin.vehicle.B).norm() == 0.0);
  CHECK(file.vehicle.rotor_thrust_max ==
        doctest::Approx(builtin.vehicle.rotor_thrust_max).epsilon(1e-15));

  CHECK((file.safety.P_omega_diag - builtin.safety.P_omega_diag).norm() <= 1e-15);
  CHECK((file.safety.P_vel_diag - builtin.safety.P_vel_diag).norm() == 0.0);
  CHECK((file.safety.P_pos_diag - builtin.safety.P_pos_diag).norm() == 0.0);
  CHECK((file.safety.fence_center - builtin.safety.fence_center).norm() == 0.0);
  CHECK(file.safety.tilt_max == doctest::Approx(builtin.safety.tilt_max).epsilon(1e-15));
  CHECK(file.safety.a_omega == builtin.safety.a_omega);
  CHECK(file.safety.a1_tilt == builtin.safety.a1_tilt);
  CHECK(file.safety.a2_tilt == builtin.safety.a2_tilt);
  CHECK(file.safety.a0_vel == builtin.safety.a0_vel);
  CHECK(file.safety.a0_pos == builtin.safety.a0_pos);
  CHECK(file.safety.mu_vel == builtin.safety.mu_vel);
  CHECK(file.safety.mu_pos == builtin.safety.mu_pos);
  CHECK(file.safety.lambda_vel == builtin.safety.lambda_vel);
  CHECK(file.safety.lambda_pos == builtin.safety.lambda_pos);
  CHECK(file.safety.c_vel == builtin.safety.c_vel);
  CHECK(file.safety.c_pos == builtin.safety.c_pos);
  CHECK(file.safety.thrust_min ==
        doctest::Approx(builtin.safety.thrust_min).epsilon(1e-15));

  CHECK(file.gains.position == builtin.gains.position);
  CHECK(file.gains.velocity == builtin.gains.velocity);
  CHECK(file.gains.thrust == builtin.gains.thrust);
  CHECK(file.gains.attitude == builtin.gains.attitude);
  CHECK(file.gains.rate == builtin.gains.rate);
  CHECK(file.gains.yaw_rate == builtin.gains.yaw_rate);

  CHECK((file.initial_state.position - builtin.initial_state.position).norm() == 0.0);
  CHECK((file.initial_state.velocity - builtin.initial_state.velocity).norm() == 0.0);
  CHECK((file.initial_state.attitude - builtin.initial_state.attitude).norm() <= 1e-15);
  CHECK((file.initial_state.angular_velocity - builtin.initial_state.angular_velocity)
            .norm() <= 1e-15);
  CHECK(file.initial_state.thrust == builtin.initial_state.thrust);

  for (double t : {0.0, 2.5, 11.0}) {
    CHECK((file.reference.sample(t).position - builtin.reference.sample(t).position)
              .norm() <= 1e-15);
  }
}

TEST_CASE("the bundled scenario pins the documented physical settings") {
  const Scenario sc = paper_scenario();
  const double d2r = M_PI / 180.0;

  CHECK(sc.dt == 0.005);
  CHECK(sc.duration == 20.0);
  CHECK(sc.vehicle.mass == 4.34);
  CHECK(sc.vehicle.gravity == 9.81);
  CHECK(sc.vehicle.rotor_count() == 6);
  CHECK(sc.vehicle.rotor_thrust_max ==
        doctest::Approx(0.6371 * 4.34 * 9.81).epsilon(1e-15));

  CHECK((sc.initial_state.position - Eigen::Vector3d(0, 0, -5)).norm() == 0.0);
  CHECK((sc.initial_state.velocity - Eigen::Vector3d(0, 1.25, 0.625)).norm() == 0.0);
  CHECK((sc.initial_state.angular_velocity -
         Eigen::Vector3d(15.0, 15.0, 0.0) * d2r)
            .norm() <= 1e-15);
  const Eigen::Vector3d euler = rotation_to_euler_zyx(sc.initial_state.attitude);
  CHECK(euler.x() == doctest::Approx(-15.0 * d2r).epsilon(1e-12));
  CHECK(euler.y() == doctest::Approx(15.0 * d2r).epsilon(1e-12));
  CHECK(euler.z() == doctest::Approx(90.0 * d2r).epsilon(1e-12));
  CHECK(sc.initial_state.thrust == doctest::Approx(4.34 * 9.81).epsilon(1e-15));

  const double omega_max = 360.0 * d2r;
  CHECK(sc.safety.P_omega_diag[0] ==
        doctest::Approx(1.0 / (omega_max * omega_max)).epsilon(1e-15));
  CHECK(sc.safety.P_vel_diag[0] == doctest::Approx(1.0 / 4.0).epsilon(1e-15));
  CHECK(sc.safety.P_pos_diag[0] == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
  CHECK(sc.safety.tilt_max == doctest::Approx(30.0 * d2r).epsilon(1e-15));
  CHECK((sc.safety.fence_center - Eigen::Vector3d(0, 0, -5)).norm() == 0.0);

  // circular reference: radius 2.5 at 0.5 rad/s, z = -5 + 2.5 sin(0.25 t)
  const ReferenceSample s = sc.reference.sample(2.0);
  CHECK(s.position.x() == doctest::Approx(2.5 * std::cos(1.0)).epsilon(1e-15));
  CHECK(s.position.y() == doctest::Approx(2.5 * std::sin(1.0)).epsilon(1e-15));
  CHECK(s.position.z() == doctest::Approx(-5.0 + 2.5 * std::sin(0.5)).epsilon(1e-15));
}

TEST_CASE("missing or malformed config files are config errors") {
  CHECK_THROWS_AS(load_scenario("/nonexistent/config.json"), ConfigError);

  const auto tmp = std::filesystem::temp_directory_path() / "mcsafe_bad_config.json";
  std::ofstream(tmp) << "{ not json";
  CHECK_THROWS_AS(load_scenario(tmp), ConfigError);
  std::filesystem::remove(tmp);
}

TEST_CASE("trajectory CSV has the documented stable header") {
  Scenario sc = paper_scenario();
  sc.duration = 0.01;
  const SimResult r = run(sc);

  std::ostringstream out;
  write_trajectory_csv(out, r);
  std::istringstream in(out.str());
  std::string comment, header, first_row;
  std::getline(in, comment);
  std::getline(in, header);
  std::getline(in, first_row);

  CHECK(comment.rfind("# columns:", 0) == 0);
  CHECK(header ==
        "t,px,py,pz,vx,vy,vz,roll_deg,pitch_deg,yaw_deg,wx,wy,wz,thrust,"
        "thrust_rate_cmd,Mx,My,Mz,u1,u2,u3,u4,u5,u6,"
        "h_omega,h0_tilt,h1_tilt,h0_vel,h_vel,h0_pos,h_pos,"
        "qp_status,qp_active_set,qp_slack,filter_time_us,saturated");
  // one comment, one header, one row per record
  int lines = 3;
  std::string rest;
  while (std::getline(in, rest)) ++lines;
  CHECK(lines == 2 + static_cast<int>(r.records.size()));
}

TEST_CASE("report JSON validates against the shipped schema") {
  Scenario sc = paper_scenario();
  sc.duration = 0.05;
  const SimResult r = run(sc);
  const nlohmann::json doc = report_to_json(r.report, sc);

  std::ifstream schema_file(schema_path());
  REQUIRE(schema_file.good());
  nlohmann::json schema;
  schema_file >> schema;

  const std::string err = mini_schema::validate(doc, schema);
  CHECK_MESSAGE(err.empty(), err);

  // schema sanity: drop a required field and the validator must complain
  nlohmann::json broken = doc;
  broken.erase("min_barriers");
  CHECK(!mini_schema::validate(broken, schema).empty());
}

TEST_CASE("compare JSON carries both reports and per-family deltas") {
  Scenario sc = paper_scenario();
  sc.duration = 0.05;
  const SimResult on = run(sc);
  sc.filter_enabled = false;
  const SimResult off = run(sc);

  const nlohmann::json doc = compare_to_json(on.report, off.report, sc);
  CHECK(doc.contains("filtered"));
  CHECK(doc.contains("nominal"));
  CHECK(doc["filtered"]["filter_enabled"] == true);
  CHECK(doc["nominal"]["filter_enabled"] == false);
  const auto& delta = doc["min_h_delta"];
  for (const char* key : {"h_omega", "h0_tilt", "h0_vel", "h0_pos"}) {
    CHECK(delta.contains(key));
  }
  CHECK(delta["h0_pos"].get<double>() ==
        doctest::Approx(on.report.position.min_value - off.report.position.min_value));
}
