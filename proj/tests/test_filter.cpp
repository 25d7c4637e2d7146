#include <doctest.h>

#include "mcsafe/filter.hpp"
#include "mcsafe/nominal.hpp"
#include "mcsafe/scenario.hpp"

using namespace mcsafe;

namespace {

const Scenario& paper() {
  static const Scenario sc = paper_scenario();
  return sc;
}

}  // namespace

TEST_CASE("deep-interior hover passes a stabilizing input through unchanged") {
  const SafetyConfig& cfg = paper().safety;
  const VehicleParams& par = paper().vehicle;

  AugmentedState x;
  x.position = cfg.fence_center;
  x.velocity.setZero();
  x.attitude.setIdentity();
  x.angular_velocity.setZero();
  x.thrust = par.hover_thrust();

  WrenchRateInput nominal;
  nominal.thrust_rate = 0.3;
  nominal.torque = Eigen::Vector3d(0.02, -0.01, 0.005);

  const FilterResult fr = filter(x, nominal, cfg, par);
  CHECK(fr.qp.status == QpStatus::Optimal);
  CHECK(fr.qp.active_set.empty());
  CHECK((fr.input.as_vector() - nominal.as_vector()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(fr.barriers.h_pos == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("outward motion on the fence boundary activates the position row") {
  const SafetyConfig& cfg = paper().safety;
  const VehicleParams& par = paper().vehicle;

  AugmentedState x;
  const double p_max = 1.0 / std::sqrt(cfg.P_pos_diag.maxCoeff());
  // near the composite boundary, moving outward
  x.position = cfg.fence_center + 0.93 * p_max * Eigen::Vector3d(1, 0, 0);
  x.velocity = Eigen::Vector3d(1.0, 0.0, 0.0);
  x.attitude.setIdentity();
  x.angular_velocity.setZero();
  x.thrust = par.hover_thrust();

  REQUIRE(barriers::h_pos(x, cfg, par) < 0.05);

  WrenchRateInput nominal;  // keep pushing outward: no corrective torque
  const FilterResult fr = filter(x, nominal, cfg, par);
  CHECK(fr.qp.status == QpStatus::Optimal);
  CHECK((fr.input.as_vector() - nominal.as_vector()).norm() > 1e-6);
  bool position_active = false;
  for (int i : fr.qp.active_set) position_active |= (i == 3);
  CHECK(position_active);
}

TEST_CASE("paper scenario at t=0 is feasible") {
  const Scenario& sc = paper();
  NominalController nominal(sc.reference, sc.gains);
  const WrenchRateInput k_d = nominal(sc.initial_state, 0.0, sc.vehicle);
  const FilterResult fr = filter(sc.initial_state, k_d, sc.safety, sc.vehicle);
  CHECK(fr.qp.status == QpStatus::Optimal);
  CHECK(fr.qp.kkt_residual <= 1e-9);
}

TEST_CASE("filter propagates the thrust singularity") {
  AugmentedState x;
  x.position = paper().safety.fence_center;
  x.velocity.setZero();
  x.attitude.setIdentity();
  x.angular_velocity.setZero();
  x.thrust = 0.5 * paper().safety.thrust_min;
  CHECK_THROWS_AS(filter(x, WrenchRateInput{}, paper().safety, paper().vehicle),
                  SingularThrust);
}
