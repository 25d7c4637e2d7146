#include <doctest.h>

#include <random>

#include "mcsafe/qp.hpp"

using namespace mcsafe;

namespace {

AffineConstraintRow make_row(const Eigen::Vector4d& c, double d) {
  AffineConstraintRow row;
  row.coeff = c;
  row.offset = d;
  return row;
}

QpProblem random_feasible_problem(std::mt19937_64& rng, int m,
                                  Eigen::Vector4d* interior_out = nullptr) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Eigen::Vector4d interior(2.0 * g(rng), 2.0 * g(rng), 2.0 * g(rng), 2.0 * g(rng));
  QpProblem p;
  p.target = Eigen::Vector4d(3.0 * g(rng), 3.0 * g(rng), 3.0 * g(rng), 3.0 * g(rng));
  for (int i = 0; i < m; ++i) {
    Eigen::Vector4d c(g(rng), g(rng), g(rng), g(rng));
    while (c.norm() < 1e-3) c = Eigen::Vector4d(g(rng), g(rng), g(rng), g(rng));
    p.rows.push_back(make_row(c, -c.dot(interior) + 0.01 + 2.0 * u(rng)));
  }
  if (interior_out) *interior_out = interior;
  return p;
}

/// Independent oracle: solve every active set through the stacked KKT system
/// [I, -C'; C, 0] and keep the best feasible KKT point.
Eigen::Vector4d stacked_kkt_oracle(const QpProblem& p) {
  const int m = static_cast<int>(p.rows.size());
  double best_obj = std::numeric_limits<double>::infinity();
  Eigen::Vector4d best = p.target;
  for (int mask = 0; mask < (1 << m); ++mask) {
    std::vector<int> act;
    for (int i = 0; i < m; ++i)
      if (mask & (1 << i)) act.push_back(i);
    const int k = static_cast<int>(act.size());
    if (k > 4) continue;

    Eigen::MatrixXd kkt(4 + k, 4 + k);
    kkt.setZero();
    kkt.topLeftCorner(4, 4).setIdentity();
    Eigen::VectorXd rhs(4 + k);
    rhs.head<4>() = p.target;
    for (int i = 0; i < k; ++i) {
      kkt.block<4, 1>(0, 4 + i) = -p.rows[act[i]].coeff;
      kkt.block<1, 4>(4 + i, 0) = p.rows[act[i]].coeff.transpose();
      rhs[4 + i] = -p.rows[act[i]].offset;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd sol = lu.solve(rhs);
    const Eigen::Vector4d x = sol.head<4>();
    const Eigen::VectorXd lambda = sol.tail(k);
    if (k > 0 && lambda.minCoeff() < -1e-10) continue;
    bool feasible = true;
    for (const auto& row : p.rows) {
      if (row.value(x) < -1e-9) {
        feasible = false;
        break;
      }
    }
    if (!feasible) continue;
    const double obj = 0.5 * (x - p.target).squaredNorm();
    if (obj < best_obj) {
      best_obj = obj;
      best = x;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("unconstrained optimum feasible: target returned unchanged") {
  QpProblem p;
  p.target = Eigen::Vector4d(1.0, -2.0, 0.5, 3.0);
  p.rows.push_back(make_row(Eigen::Vector4d(1, 0, 0, 0), 10.0));
  p.rows.push_back(make_row(Eigen::Vector4d(0, 1, 1, 0), 20.0));

  const QpSolution sol = solve_qp(p);
  CHECK(sol.status == QpStatus::Optimal);
  CHECK(sol.active_set.empty());
  CHECK((sol.nu_star - p.target).norm() == 0.0);
  CHECK(sol.slack_used == 0.0);
}

TEST_CASE("single violated row projects onto the half-space") {
  std::mt19937_64 rng(211);
  std::normal_distribution<double> g;
  for (int i = 0; i < 100; ++i) {
    QpProblem p;
    p.target = Eigen::Vector4d(g(rng), g(rng), g(rng), g(rng)) * 3.0;
    Eigen::Vector4d c(g(rng), g(rng), g(rng), g(rng));
    while (c.norm() < 1e-3) c = Eigen::Vector4d(g(rng), g(rng), g(rng), g(rng));
    const double d = g(rng);
    p.rows.push_back(make_row(c, d));

    const QpSolution sol = solve_qp(p);
    REQUIRE(sol.status == QpStatus::Optimal);
    const double viol = c.dot(p.target) + d;
    Eigen::Vector4d expected = p.target;
    if (viol < 0.0) expected -= c * viol / c.squaredNorm();
    CHECK((sol.nu_star - expected).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("random problems match the stacked-KKT oracle") {
  std::mt19937_64 rng(223);
  for (int i = 0; i < 200; ++i) {
    const int m = 1 + static_cast<int>(i % 6);
    const QpProblem p = random_feasible_problem(rng, m);
    const QpSolution sol = solve_qp(p);
    REQUIRE(sol.status == QpStatus::Optimal);
    CHECK(sol.kkt_residual <= 1e-9);

    const Eigen::Vector4d oracle = stacked_kkt_oracle(p);
    const double obj_sol = 0.5 * (sol.nu_star - p.target).squaredNorm();
    const double obj_oracle = 0.5 * (oracle - p.target).squaredNorm();
    CHECK(std::abs(obj_sol - obj_oracle) <= 1e-6 * std::max(1.0, obj_oracle));
  }
}

TEST_CASE("minimality against random feasible points") {
  std::mt19937_64 rng(227);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    Eigen::Vector4d interior;
    const QpProblem p = random_feasible_problem(rng, 4, &interior);
    const QpSolution sol = solve_qp(p);
    REQUIRE(sol.status == QpStatus::Optimal);
    const double obj_star = 0.5 * (sol.nu_star - p.target).squaredNorm();

    int accepted = 0;
    int tries = 0;
    while (accepted < 1000 && tries < 100000) {
      ++tries;
      const Eigen::Vector4d cand =
          interior + (0.1 + 3.0 * u(rng)) * Eigen::Vector4d(g(rng), g(rng), g(rng), g(rng));
      bool feasible = true;
      for (const auto& row : p.rows) {
        if (row.value(cand) < 0.0) {
          feasible = false;
          break;
        }
      }
      if (!feasible) continue;
      ++accepted;
      CHECK(obj_star <= 0.5 * (cand - p.target).squaredNorm() + 1e-9);
    }
    CHECK(accepted == 1000);
  }
}

TEST_CASE("KKT certificate holds at the reported solution") {
  std::mt19937_64 rng(229);
  for (int i = 0; i < 100; ++i) {
    const QpProblem p = random_feasible_problem(rng, 4);
    const QpSolution sol = solve_qp(p);
    REQUIRE(sol.status == QpStatus::Optimal);

    // stationarity
    Eigen::Vector4d stat = sol.nu_star - p.target;
    for (size_t r = 0; r < p.rows.size(); ++r) {
      stat -= sol.dual[static_cast<int>(r)] * p.rows[r].coeff;
    }
    CHECK(stat.norm() <= 1e-9);
    // dual feasibility and complementary slackness
    for (size_t r = 0; r < p.rows.size(); ++r) {
      const double lambda = sol.dual[static_cast<int>(r)];
      CHECK(lambda >= -1e-12);
      CHECK(std::abs(lambda * p.rows[r].value(sol.nu_star)) <= 1e-9);
    }
  }
}

TEST_CASE("idempotence: feasible targets pass through bit-identically") {
  std::mt19937_64 rng(233);
  for (int i = 0; i < 50; ++i) {
    Eigen::Vector4d interior;
    QpProblem p = random_feasible_problem(rng, 4, &interior);
    p.target = interior;  // strictly feasible point
    const QpSolution sol = solve_qp(p);
    CHECK(sol.status == QpStatus::Optimal);
    CHECK((sol.nu_star - interior).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("determinism: identical inputs give bit-identical outputs") {
  std::mt19937_64 rng(239);
  const QpProblem p = random_feasible_problem(rng, 4);
  const QpSolution a = solve_qp(p);
  const QpSolution b = solve_qp(p);
  CHECK(a.nu_star == b.nu_star);
  CHECK(a.active_set == b.active_set);
  CHECK(a.kkt_residual == b.kkt_residual);
}

TEST_CASE("jointly infeasible rows trigger the shared-slack relaxation") {
  QpProblem p;
  p.target = Eigen::Vector4d::Zero();
  // c x >= 1 and -c x >= 1 cannot hold together
  const Eigen::Vector4d c(1, 0, 0, 0);
  p.rows.push_back(make_row(c, -1.0));
  p.rows.push_back(make_row(-c, -1.0));

  const QpSolution sol = solve_qp(p);
  CHECK(sol.status == QpStatus::Relaxed);
  CHECK(sol.slack_used > 0.9);  // needs s ~ 1 to open the wedge
  // relaxed rows hold with the shared slack
  for (const auto& row : p.rows) {
    CHECK(row.value(sol.nu_star) + sol.slack_used >= -1e-9);
  }
}

TEST_CASE("row-count bound is enforced") {
  QpProblem p;
  p.target = Eigen::Vector4d::Zero();
  for (int i = 0; i < 17; ++i) {
    p.rows.push_back(make_row(Eigen::Vector4d(1, 0, 0, 0), 1.0));
  }
  CHECK_THROWS_AS(solve_qp(p), ConfigError);
  QpOptions opt;
  opt.max_rows = 20;
  CHECK_NOTHROW(solve_qp(p, opt));
}

TEST_CASE("non-finite inputs are rejected") {
  QpProblem p;
  p.target = Eigen::Vector4d(std::numeric_limits<double>::quiet_NaN(), 0, 0, 0);
  CHECK_THROWS_AS(solve_qp(p), ConfigError);
}
