#include "mcsafe/checks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

namespace mcsafe::checks {

namespace {

Eigen::Vector3d random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Vector3d v(g(rng), g(rng), g(rng));
  while (v.norm() < 1e-6) v = Eigen::Vector3d(g(rng), g(rng), g(rng));
  return v.normalized();
}

Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  while (q.norm() < 1e-6) q = Eigen::Quaterniond(g(rng), g(rng), g(rng), g(rng));
  q.normalize();
  return q.toRotationMatrix();
}

double bound_from_diag(const Eigen::Vector3d& diag) {
  // isotropic fallback scale: P = I / b^2  =>  b = 1/sqrt(max diag)
  return 1.0 / std::sqrt(diag.maxCoeff());
}

}  // namespace

double relative_error(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

AugmentedState sample_state(std::mt19937_64& rng, const SafetyConfig& cfg,
                            const VehicleParams& par) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double pos_bound = bound_from_diag(cfg.P_pos_diag);
  const double vel_bound = bound_from_diag(cfg.P_vel_diag);
  const double omega_bound = bound_from_diag(cfg.P_omega_diag);

  AugmentedState x;
  x.position = cfg.fence_center + pos_bound * 1.2 * u(rng) * random_unit(rng);
  x.velocity = vel_bound * 1.2 * u(rng) * random_unit(rng);
  x.attitude = random_rotation(rng);
  x.angular_velocity = omega_bound * u(rng) * random_unit(rng);
  x.thrust = par.hover_thrust() * (0.2 + 1.8 * u(rng));
  return x;
}

AugmentedState sample_safe_state(std::mt19937_64& rng, const SafetyConfig& cfg,
                                 const VehicleParams& par, double margin) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double pos_bound = bound_from_diag(cfg.P_pos_diag);
  const double vel_bound = bound_from_diag(cfg.P_vel_diag);
  const double omega_bound = bound_from_diag(cfg.P_omega_diag);

  for (int attempt = 0; attempt < 100000; ++attempt) {
    AugmentedState x;
    x.position = cfg.fence_center + 0.7 * pos_bound * u(rng) * random_unit(rng);
    x.velocity = 0.6 * vel_bound * u(rng) * random_unit(rng);
    // Tilt the desired axis by a bounded angle, then spin around it.
    const double tilt = 0.6 * cfg.tilt_max * u(rng);
    Eigen::Vector3d ortho = random_unit(rng);
    ortho = (ortho - ortho.dot(cfg.tilt_axis_des) * cfg.tilt_axis_des).normalized();
    const Eigen::Vector3d axis = cfg.tilt_axis_des.cross(ortho);
    Eigen::Matrix3d R = Eigen::AngleAxisd(tilt, axis).toRotationMatrix() *
                        Eigen::AngleAxisd(2.0 * M_PI * u(rng), cfg.tilt_axis_des)
                            .toRotationMatrix();
    x.attitude = polar_rotation(R);
    x.angular_velocity = 0.3 * omega_bound * u(rng) * random_unit(rng);
    x.thrust = par.hover_thrust() * (0.85 + 0.3 * u(rng));

    if (barriers::h_omega(x, cfg) < margin) continue;
    if (barriers::h0_tilt(x, cfg) < margin) continue;
    if (barriers::h1_tilt(x, cfg) < margin) continue;
    if (barriers::h0_vel(x, cfg) < margin) continue;
    if (barriers::h0_pos(x, cfg) < margin) continue;
    if (barriers::h_vel(x, cfg, par) < margin) continue;
    if (barriers::h_pos(x, cfg, par) < margin) continue;
    return x;
  }
  throw ConfigError("could not sample a state inside the safe sets; margins too tight");
}

WrenchRateInput sample_input(std::mt19937_64& rng, double thrust_rate_scale,
                             double torque_scale) {
  std::normal_distribution<double> g;
  WrenchRateInput nu;
  nu.thrust_rate = thrust_rate_scale * g(rng);
  nu.torque = torque_scale * Eigen::Vector3d(g(rng), g(rng), g(rng));
  return nu;
}

SuiteResult derivative_suite(const CheckOptions& opt, const SafetyConfig& cfg,
                             const VehicleParams& par) {
  SuiteResult res{"derivative_fd", 0, 0.0, 1e-5, false};
  std::mt19937_64 rng(opt.seed);

  for (int i = 0; i < opt.derivative_states; ++i) {
    const AugmentedState x = sample_state(rng, cfg, par);
    const WrenchRateInput nu = sample_input(rng, 0.5 * par.hover_thrust(), 2.0);
    const WrenchRateInput drift{};

    // k0 rate (velocity chain): analytic form used inside k1_vel.
    {
      const Eigen::Vector3d accel =
          par.gravity * Eigen::Vector3d::UnitZ() + x.force() / par.mass;
      const Eigen::Vector3d analytic = -0.5 * cfg.c_vel * par.mass * accel;
      for (int a = 0; a < 3; ++a) {
        const double fd = fd_flow_derivative(
            [&](const AugmentedState& s) {
              return barriers::k0_vel(s, cfg, par)[a];
            },
            x, drift, par);
        res.worst = std::max(res.worst, relative_error(analytic[a], fd));
      }
    }

    // k1 rate (position chain): forward-mode result vs finite differences.
    {
      const Eigen::Vector3d analytic = barriers::k1_pos_rate<double>(x, cfg, par);
      for (int a = 0; a < 3; ++a) {
        const double fd = fd_flow_derivative(
            [&](const AugmentedState& s) {
              return barriers::k1_pos(s, cfg, par)[a];
            },
            x, drift, par);
        res.worst = std::max(res.worst, relative_error(analytic[a], fd));
      }
    }

    // Closed-form h rates embedded in the rotational rows.
    {
      const AffineConstraintRow row = barriers::row_omega(x, cfg, par);
      const double analytic =
          row.value(nu.as_vector()) - cfg.a_omega * barriers::h_omega(x, cfg);
      const double fd = fd_flow_derivative(
          [&](const AugmentedState& s) { return barriers::h_omega(s, cfg); }, x, nu,
          par);
      res.worst = std::max(res.worst, relative_error(analytic, fd));
    }
    {
      const AffineConstraintRow row = barriers::row_tilt(x, cfg, par);
      const double analytic =
          row.value(nu.as_vector()) - cfg.a2_tilt * barriers::h1_tilt(x, cfg);
      const double fd = fd_flow_derivative(
          [&](const AugmentedState& s) { return barriers::h1_tilt(s, cfg); }, x, nu,
          par);
      res.worst = std::max(res.worst, relative_error(analytic, fd));
    }

    // Forward-mode composite-barrier rates.
    {
      const auto [h, hdot] = barriers::value_and_flow_derivative(
          [&](const auto& s) { return barriers::h_vel(s, cfg, par); }, x, nu, par);
      const double fd = fd_flow_derivative(
          [&](const AugmentedState& s) { return barriers::h_vel(s, cfg, par); }, x,
          nu, par);
      res.worst = std::max(res.worst, relative_error(hdot, fd));
    }
    {
      const auto [h, hdot] = barriers::value_and_flow_derivative(
          [&](const auto& s) { return barriers::h_pos(s, cfg, par); }, x, nu, par);
      const double fd = fd_flow_derivative(
          [&](const AugmentedState& s) { return barriers::h_pos(s, cfg, par); }, x,
          nu, par);
      res.worst = std::max(res.worst, relative_error(hdot, fd));
    }
    ++res.cases;
  }
  res.passed = res.worst <= res.tolerance;
  return res;
}

SuiteResult affinity_suite(const CheckOptions& opt, const SafetyConfig& cfg,
                           const VehicleParams& par) {
  SuiteResult res{"affinity", 0, 0.0, 1e-8, false};
  std::mt19937_64 rng(opt.seed + 1);

  for (int i = 0; i < opt.affinity_states; ++i) {
    const AugmentedState x = sample_state(rng, cfg, par);
    auto rows = barriers::all_rows(x, cfg, par);
    if (opt.inject_sign_error && i == 0) {
      rows[0].offset = -rows[0].offset - 1.0;  // canary
    }

    struct Entry {
      const AffineConstraintRow* row;
      double slope;
      std::function<Dual<double>(const AugmentedStateT<Dual<double>>&)> h;
    };
    const std::array<Entry, 4> entries = {
        Entry{&rows[0], cfg.a_omega,
              [&](const auto& s) { return barriers::h_omega(s, cfg); }},
        Entry{&rows[1], cfg.a2_tilt,
              [&](const auto& s) { return barriers::h1_tilt(s, cfg); }},
        Entry{&rows[2], cfg.a0_vel,
              [&](const auto& s) { return barriers::h_vel(s, cfg, par); }},
        Entry{&rows[3], cfg.a0_pos,
              [&](const auto& s) { return barriers::h_pos(s, cfg, par); }},
    };

    for (int k = 0; k < opt.affinity_inputs; ++k) {
      const WrenchRateInput nu =
          sample_input(rng, 0.5 * par.hover_thrust(), 2.0);
      for (const Entry& e : entries) {
        const auto [h, hdot] =
            barriers::value_and_flow_derivative(e.h, x, nu, par);
        const double lhs = e.row->value(nu.as_vector());
        res.worst = std::max(res.worst, relative_error(lhs, hdot + e.slope * h));
      }
      ++res.cases;
    }
  }
  res.passed = res.worst <= res.tolerance;
  return res;
}

SuiteResult certificate_suite(const CheckOptions& opt, const SafetyConfig& cfg,
                              const VehicleParams& par) {
  SuiteResult res{"certificate", 0, 0.0, 1e-10, false};
  std::mt19937_64 rng(opt.seed + 2);
  std::normal_distribution<double> g;

  for (int i = 0; i < opt.certificate_samples; ++i) {
    AugmentedState x;
    x.position = cfg.fence_center + Eigen::Vector3d(g(rng), g(rng), g(rng));
    x.velocity = 2.0 * Eigen::Vector3d(g(rng), g(rng), g(rng));
    x.attitude = random_rotation(rng);
    x.angular_velocity.setZero();
    x.thrust = par.hover_thrust();

    // Velocity chain: v_dot under the virtual force command k0.
    {
      AugmentedStateRate dx{};
      dx.position.setZero();
      dx.velocity = par.gravity * Eigen::Vector3d::UnitZ() +
                    barriers::k0_vel(x, cfg, par) / par.mass;
      dx.attitude.setZero();
      dx.angular_velocity.setZero();
      dx.thrust = 0.0;
      const Dual<double> h = barriers::h0_vel(seed_state(x, dx), cfg);
      const double lhs = h.dot + cfg.a0_vel * h.val;
      const double quad = x.velocity.dot(cfg.P_vel_diag.cwiseProduct(x.velocity));
      const double rhs = cfg.a0_vel + (cfg.c_vel - cfg.a0_vel) * quad;
      res.worst = std::max(res.worst, relative_error(lhs, rhs));
      if (!(rhs > 0.0)) {
        res.worst = std::max(res.worst, 1.0);  // certificate must be strictly positive
      }
    }

    // Position chain: p_dot under the virtual velocity command k0.
    {
      AugmentedStateRate dx{};
      dx.position = barriers::k0_pos(x, cfg);
      dx.velocity.setZero();
      dx.attitude.setZero();
      dx.angular_velocity.setZero();
      dx.thrust = 0.0;
      const Dual<double> h = barriers::h0_pos(seed_state(x, dx), cfg);
      const double lhs = h.dot + cfg.a0_pos * h.val;
      const Eigen::Vector3d e = x.position - cfg.fence_center;
      const double quad = e.dot(cfg.P_pos_diag.cwiseProduct(e));
      const double rhs = cfg.a0_pos + (cfg.c_pos - cfg.a0_pos) * quad;
      res.worst = std::max(res.worst, relative_error(lhs, rhs));
      if (!(rhs > 0.0)) {
        res.worst = std::max(res.worst, 1.0);
      }
    }
    ++res.cases;
  }
  res.passed = res.worst <= res.tolerance;
  return res;
}

SuiteResult qp_suite(const CheckOptions& opt) {
  SuiteResult res{"qp_kkt", 0, 0.0, 1e-9, false};
  std::mt19937_64 rng(opt.seed + 3);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);

  for (int i = 0; i < opt.qp_problems; ++i) {
    const int m = 1 + static_cast<int>(u(rng) * 8.0);
    const Eigen::Vector4d interior(2.0 * g(rng), 2.0 * g(rng), 2.0 * g(rng),
                                   2.0 * g(rng));
    QpProblem problem;
    problem.target = Eigen::Vector4d(3.0 * g(rng), 3.0 * g(rng), 3.0 * g(rng),
                                     3.0 * g(rng));
    for (int r = 0; r < m; ++r) {
      AffineConstraintRow row;
      row.coeff = Eigen::Vector4d(g(rng), g(rng), g(rng), g(rng));
      while (row.coeff.norm() < 1e-3) {
        row.coeff = Eigen::Vector4d(g(rng), g(rng), g(rng), g(rng));
      }
      row.offset = -row.coeff.dot(interior) + 0.01 + 2.0 * u(rng);
      problem.rows.push_back(row);
    }

    const QpSolution sol = solve_qp(problem);
    if (sol.status != QpStatus::Optimal) {
      res.worst = std::max(res.worst, 1.0);
      continue;
    }
    res.worst = std::max(res.worst, sol.kkt_residual);

    if (m == 1) {
      // closed-form half-space projection
      const auto& row = problem.rows[0];
      const double viol = row.coeff.dot(problem.target) + row.offset;
      Eigen::Vector4d expected = problem.target;
      if (viol < 0.0) {
        expected -= row.coeff * viol / row.coeff.squaredNorm();
      }
      res.worst =
          std::max(res.worst, (sol.nu_star - expected).cwiseAbs().maxCoeff());
    }

    // No random feasible point may beat the reported optimum.
    const double obj_star = 0.5 * (sol.nu_star - problem.target).squaredNorm();
    int accepted = 0;
    int tries = 0;
    while (accepted < opt.qp_feasible_samples && tries < 50 * opt.qp_feasible_samples) {
      ++tries;
      const double sigma = 0.1 + 3.0 * u(rng);
      Eigen::Vector4d candidate =
          interior + sigma * Eigen::Vector4d(g(rng), g(rng), g(rng), g(rng));
      bool feasible = true;
      for (const auto& row : problem.rows) {
        if (row.coeff.dot(candidate) + row.offset < 0.0) {
          feasible = false;
          break;
        }
      }
      if (!feasible) continue;
      ++accepted;
      const double obj = 0.5 * (candidate - problem.target).squaredNorm();
      res.worst = std::max(res.worst, obj_star - obj);
    }
    ++res.cases;
  }
  res.passed = res.worst <= res.tolerance;
  return res;
}

std::vector<SuiteResult> run_property_suites(const CheckOptions& opt,
                                             const SafetyConfig& cfg,
                                             const VehicleParams& par) {
  return {derivative_suite(opt, cfg, par), affinity_suite(opt, cfg, par),
          certificate_suite(opt, cfg, par), qp_suite(opt)};
}

}  // namespace mcsafe::checks
