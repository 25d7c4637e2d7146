#pragma once

#include <random>
#include <string>
#include <vector>

#include "mcsafe/barriers.hpp"
#include "mcsafe/qp.hpp"
#include "mcsafe/sim.hpp"

namespace mcsafe::checks {

struct SuiteResult {
  std::string name;
  int cases{};
  double worst{};      ///< worst residual over all cases
  double tolerance{};
  bool passed{};
};

struct CheckOptions {
  uint64_t seed = 1;
  int derivative_states = 100;
  int affinity_states = 200;
  int affinity_inputs = 20;
  int certificate_samples = 100;
  int qp_problems = 500;
  int qp_feasible_samples = 1000;
  /// Self-test canary: corrupts one constraint row before checking, so a
  /// passing harness must turn red.
  bool inject_sign_error = false;
};

/// Random state with |T| in [0.2, 2] mg, uniformly random attitude, and
/// bounded position/velocity/rates near the configured safe sets.
AugmentedState sample_state(std::mt19937_64& rng, const SafetyConfig& cfg,
                            const VehicleParams& par);

/// Random state inside every safe set (including the composite barriers)
/// with at least the given margin. Rejection sampling.
AugmentedState sample_safe_state(std::mt19937_64& rng, const SafetyConfig& cfg,
                                 const VehicleParams& par, double margin);

WrenchRateInput sample_input(std::mt19937_64& rng, double thrust_rate_scale,
                             double torque_scale);

/// |a - b| / max(1, |a|, |b|)
double relative_error(double a, double b);

/// Central finite difference of fn along the flow integrated under constant
/// nu; the independent oracle for every analytic/forward-mode derivative.
template <class F>
double fd_flow_derivative(F&& fn, const AugmentedState& x, const WrenchRateInput& nu,
                          const VehicleParams& par, double delta = 1e-5) {
  const AugmentedState fwd = step(x, nu, delta, par);
  const AugmentedState bwd = step(x, nu, -delta, par);
  return (fn(fwd) - fn(bwd)) / (2.0 * delta);
}

/// Analytic derivatives (k0/k1 rates, the four h-rates) vs central finite
/// differences along integrated flows.
SuiteResult derivative_suite(const CheckOptions& opt, const SafetyConfig& cfg,
                             const VehicleParams& par);

/// Each extracted affine row vs an independently evaluated h_dot + alpha(h)
/// at random inputs.
SuiteResult affinity_suite(const CheckOptions& opt, const SafetyConfig& cfg,
                           const VehicleParams& par);

/// Closed-form virtual-controller certificates for the velocity and position
/// chains.
SuiteResult certificate_suite(const CheckOptions& opt, const SafetyConfig& cfg,
                              const VehicleParams& par);

/// Active-set enumeration vs KKT conditions, random feasible points, and the
/// single-row projection closed form.
SuiteResult qp_suite(const CheckOptions& opt);

std::vector<SuiteResult> run_property_suites(const CheckOptions& opt,
                                             const SafetyConfig& cfg,
                                             const VehicleParams& par);

}  // namespace mcsafe::checks
