#include "mcsafe/qp.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "mcsafe/errors.hpp"

namespace mcsafe {

std::string_view to_string(QpStatus status) {
  switch (status) {
    case QpStatus::Optimal:
      return "optimal";
    case QpStatus::Relaxed:
      return "relaxed";
    case QpStatus::Infeasible:
      return "infeasible";
  }
  return "unknown";
}

namespace {

struct Candidate {
  Eigen::VectorXd x;
  Eigen::VectorXd lambda;    // full length m
  std::vector<int> active;
  double objective;
};

/// Visits all k-subsets of {0..m-1} in lexicographic order.
template <class Visit>
void for_each_combination(int m, int k, Visit&& visit) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    visit(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == m - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Exhaustive active-set enumeration for
///   min 1/2 (x-t)' diag(w) (x-t)  s.t.  C x + d >= 0.
/// Returns the KKT point with lowest objective, preferring smaller active
/// sets on ties (enumeration order).
std::optional<Candidate> enumerate_active_sets(const Eigen::VectorXd& target,
                                               const Eigen::VectorXd& weights,
                                               const Eigen::MatrixXd& C,
                                               const Eigen::VectorXd& d,
                                               const QpOptions& opt) {
  const int n = static_cast<int>(target.size());
  const int m = static_cast<int>(C.rows());
  const Eigen::VectorXd w_inv = weights.cwiseInverse();

  auto objective = [&](const Eigen::VectorXd& x) {
    return 0.5 * (x - target).cwiseProduct(weights.cwiseSqrt()).squaredNorm();
  };

  std::optional<Candidate> best;
  const double tie_margin = 1e-12;

  auto consider = [&](const std::vector<int>& active) {
    const int k = static_cast<int>(active.size());
    Eigen::VectorXd x;
    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m);
    if (k == 0) {
      x = target;
    } else {
      Eigen::MatrixXd Cs(k, n);
      Eigen::VectorXd ds(k);
      for (int i = 0; i < k; ++i) {
        Cs.row(i) = C.row(active[i]);
        ds[i] = d[active[i]];
      }
      const Eigen::MatrixXd gram = Cs * w_inv.asDiagonal() * Cs.transpose();
      Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
      if (!lu.isInvertible()) {
        return;  // degenerate candidate set
      }
      const Eigen::VectorXd lam = lu.solve(-(Cs * target + ds));
      if (lam.minCoeff() < -opt.dual_tol) {
        return;  // dual infeasible
      }
      for (int i = 0; i < k; ++i) lambda[active[i]] = lam[i];
      x = target + w_inv.asDiagonal() * Cs.transpose() * lam;
    }
    if (((C * x + d).array() < -opt.feas_tol).any()) {
      return;  // primal infeasible
    }
    const double obj = objective(x);
    if (!best || obj < best->objective - tie_margin * std::max(1.0, best->objective)) {
      best = Candidate{x, lambda, active, obj};
    }
  };

  for (int k = 0; k <= std::min(n, m); ++k) {
    if (k == 0) {
      consider({});
    } else {
      for_each_combination(m, k, [&](const std::vector<int>& idx) { consider(idx); });
    }
  }
  return best;
}

double kkt_residual(const Eigen::VectorXd& target, const Eigen::VectorXd& weights,
                    const Eigen::MatrixXd& C, const Eigen::VectorXd& d,
                    const Candidate& c) {
  const Eigen::VectorXd residuals = C * c.x + d;
  const Eigen::VectorXd stationarity =
      weights.asDiagonal() * (c.x - target) - C.transpose() * c.lambda;
  double r = stationarity.cwiseAbs().maxCoeff();
  if (c.lambda.size() > 0) {
    r = std::max(r, std::max(0.0, -c.lambda.minCoeff()));
    r = std::max(r, c.lambda.cwiseProduct(residuals).cwiseAbs().maxCoeff());
  }
  if (residuals.size() > 0) {
    r = std::max(r, std::max(0.0, -residuals.minCoeff()));
  }
  return r;
}

}  // namespace

QpSolution solve_qp(const QpProblem& problem, const QpOptions& opt) {
  const int n = static_cast<int>(problem.target.size());
  const int m = static_cast<int>(problem.rows.size());
  if (n < 1 || n > 4) {
    throw ConfigError("QP target must live in the wrench-rate space (dim <= 4)");
  }
  if (m > opt.max_rows) {
    throw ConfigError("QP has more rows than the enumeration bound");
  }
  if (!problem.target.allFinite()) {
    throw ConfigError("QP target must be finite");
  }

  Eigen::MatrixXd C(m, n);
  Eigen::VectorXd d(m);
  for (int i = 0; i < m; ++i) {
    if (!problem.rows[i].coeff.allFinite() || !std::isfinite(problem.rows[i].offset)) {
      throw ConfigError("QP rows must be finite");
    }
    C.row(i) = problem.rows[i].coeff.head(n);
    d[i] = problem.rows[i].offset;
  }

  QpSolution sol;
  const Eigen::VectorXd unit_weights = Eigen::VectorXd::Ones(n);
  if (auto c = enumerate_active_sets(problem.target, unit_weights, C, d, opt)) {
    sol.nu_star = c->x;
    sol.dual = c->lambda;
    sol.active_set = c->active;
    sol.status = QpStatus::Optimal;
    sol.slack_used = 0.0;
    sol.kkt_residual = kkt_residual(problem.target, unit_weights, C, d, *c);
    return sol;
  }

  // Jointly infeasible: share one slack s >= 0 across all rows with a
  // quadratic penalty, keeping the problem an exact QP.
  Eigen::MatrixXd C2(m + 1, n + 1);
  C2.setZero();
  C2.topLeftCorner(m, n) = C;
  C2.col(n).head(m).setOnes();
  C2(m, n) = 1.0;
  Eigen::VectorXd d2(m + 1);
  d2.head(m) = d;
  d2[m] = 0.0;
  Eigen::VectorXd target2(n + 1);
  target2 << problem.target, 0.0;
  Eigen::VectorXd weights2(n + 1);
  weights2 << unit_weights, opt.slack_weight;

  if (auto c = enumerate_active_sets(target2, weights2, C2, d2, opt)) {
    sol.nu_star = c->x.head(n);
    sol.dual = c->lambda.head(m);
    for (int i : c->active) {
      if (i < m) sol.active_set.push_back(i);
    }
    sol.status = QpStatus::Relaxed;
    sol.slack_used = std::max(0.0, c->x[n]);
    sol.kkt_residual = kkt_residual(target2, weights2, C2, d2, *c);
    return sol;
  }

  sol.nu_star = problem.target;
  sol.dual = Eigen::VectorXd::Zero(m);
  sol.status = QpStatus::Infeasible;
  sol.slack_used = 0.0;
  sol.kkt_residual = std::numeric_limits<double>::infinity();
  return sol;
}

}  // namespace mcsafe
