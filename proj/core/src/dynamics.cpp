#include "mcsafe/dynamics.hpp"

#include <cmath>

namespace mcsafe {

void VehicleParams::validate() const {
  if (!(mass > 0.0)) {
    throw ConfigError("vehicle mass must be positive");
  }
  if (!(gravity > 0.0)) {
    throw ConfigError("gravity must be positive");
  }
  if (!inertia.isApprox(inertia.transpose(), 1e-9)) {
    throw ConfigError("inertia matrix must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(inertia);
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw ConfigError("inertia matrix must be positive definite");
  }
  if (B.rows() != 4 || B.cols() < 4) {
    throw ConfigError("control effectiveness matrix must be 4 x n with n >= 4");
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(B);
  if (cod.rank() < 4) {
    throw ConfigError("control effectiveness matrix must have full row rank");
  }
  if (!(rotor_thrust_max > 0.0)) {
    throw ConfigError("rotor thrust bound must be positive");
  }
}

Eigen::MatrixXd hexacopter_x_effectiveness(double arm_length, double torque_coeff) {
  Eigen::MatrixXd B(4, 6);
  for (int k = 0; k < 6; ++k) {
    const double psi = M_PI / 6.0 + k * M_PI / 3.0;  // 30 + k*60 deg
    B(0, k) = 1.0;
    B(1, k) = -arm_length * std::sin(psi);
    B(2, k) = arm_length * std::cos(psi);
    B(3, k) = (k % 2 == 0 ? 1.0 : -1.0) * torque_coeff;
  }
  return B;
}

Eigen::VectorXd allocate(const Eigen::Vector4d& wrench, const VehicleParams& par) {
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(par.B);
  if (cod.rank() < 4) {
    throw ConfigError("control effectiveness matrix is rank deficient");
  }
  return cod.solve(wrench);
}

SaturationResult saturate(const Eigen::VectorXd& rotor_thrusts, const VehicleParams& par) {
  SaturationResult out;
  out.rotor_thrusts = rotor_thrusts.cwiseMax(0.0).cwiseMin(par.rotor_thrust_max);
  out.saturated = (out.rotor_thrusts - rotor_thrusts).cwiseAbs().maxCoeff() > 0.0;
  out.effective_wrench = par.B * out.rotor_thrusts;
  return out;
}

Eigen::Matrix3d euler_zyx_to_rotation(double roll, double pitch, double yaw) {
  return (Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()) *
          Eigen::AngleAxisd(pitch, Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(roll, Eigen::Vector3d::UnitX()))
      .toRotationMatrix();
}

Eigen::Vector3d rotation_to_euler_zyx(const Eigen::Matrix3d& R) {
  const double pitch = std::asin(std::clamp(-R(2, 0), -1.0, 1.0));
  const double roll = std::atan2(R(2, 1), R(2, 2));
  const double yaw = std::atan2(R(1, 0), R(0, 0));
  return {roll, pitch, yaw};
}

}  // namespace mcsafe
