#pragma once

#include <vector>

#include <Eigen/Dense>

#include "mcsafe/barriers.hpp"

namespace mcsafe {

/// Minimally-invasive projection problem:
///   min 1/2 || nu - target ||^2   s.t.  coeff_i . nu + offset_i >= 0.
struct QpProblem {
  Eigen::VectorXd target;
  std::vector<AffineConstraintRow> rows;
};

enum class QpStatus { Optimal, Relaxed, Infeasible };

std::string_view to_string(QpStatus status);

struct QpSolution {
  Eigen::VectorXd nu_star;      ///< minimizer (or relaxed minimizer)
  Eigen::VectorXd dual;         ///< multipliers, one per row, zero off the active set
  std::vector<int> active_set;  ///< indices of rows tight at the solution
  QpStatus status = QpStatus::Infeasible;
  double slack_used = 0.0;      ///< shared slack of the relaxed problem, 0 when optimal
  double kkt_residual = 0.0;    ///< max of stationarity/feasibility/complementarity residuals
};

struct QpOptions {
  int max_rows = 16;            ///< enumeration bound (2^m candidate sets)
  double feas_tol = 1e-9;       ///< primal feasibility tolerance
  double dual_tol = 1e-12;      ///< dual feasibility tolerance
  double slack_weight = 1e6;    ///< quadratic penalty on the shared slack
};

/// Exact solve by enumerating candidate active sets and checking KKT.
/// Deterministic: candidates are visited by ascending set size, then
/// lexicographic index order; jointly infeasible problems are re-solved with
/// a shared penalized slack and reported as Relaxed.
QpSolution solve_qp(const QpProblem& problem, const QpOptions& options = {});

}  // namespace mcsafe
