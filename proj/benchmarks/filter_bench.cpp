#include <random>

#include <benchmark/benchmark.h>

#include "mcsafe/checks.hpp"
#include "mcsafe/filter.hpp"
#include "mcsafe/scenario.hpp"
#include "mcsafe/sim.hpp"

namespace {

using namespace mcsafe;

const Scenario& scenario() {
  static const Scenario sc = paper_scenario();
  return sc;
}

std::vector<AugmentedState> sample_states(int n) {
  std::mt19937_64 rng(42);
  std::vector<AugmentedState> states;
  states.reserve(n);
  for (int i = 0; i < n; ++i) {
    states.push_back(checks::sample_state(rng, scenario().safety, scenario().vehicle));
  }
  return states;
}

void BM_BuildRows(benchmark::State& state) {
  const auto states = sample_states(64);
  size_t i = 0;
  for (auto _ : state) {
    const auto rows =
        barriers::all_rows(states[i++ % states.size()], scenario().safety, scenario().vehicle);
    benchmark::DoNotOptimize(rows);
  }
}
BENCHMARK(BM_BuildRows);

void BM_SolveQp(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  std::vector<QpProblem> problems;
  for (int i = 0; i < 64; ++i) {
    QpProblem p;
    p.target = Eigen::Vector4d(g(rng), g(rng), g(rng), g(rng)) * 3.0;
    const Eigen::Vector4d interior(g(rng), g(rng), g(rng), g(rng));
    for (int r = 0; r < 4; ++r) {
      AffineConstraintRow row;
      row.coeff = Eigen::Vector4d(g(rng), g(rng), g(rng), g(rng));
      row.offset = -row.coeff.dot(interior) + 0.1;
      p.rows.push_back(row);
    }
    problems.push_back(std::move(p));
  }
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_qp(problems[i++ % problems.size()]));
  }
}
BENCHMARK(BM_SolveQp);

void BM_FilterStep(benchmark::State& state) {
  const auto states = sample_states(64);
  const WrenchRateInput nominal{1.0, Eigen::Vector3d(0.1, -0.2, 0.05)};
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        filter(states[i++ % states.size()], nominal, scenario().safety, scenario().vehicle));
  }
}
BENCHMARK(BM_FilterStep);

void BM_IntegratorStep(benchmark::State& state) {
  const auto states = sample_states(64);
  const WrenchRateInput nu{0.5, Eigen::Vector3d(0.05, -0.02, 0.01)};
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        step(states[i++ % states.size()], nu, 0.005, scenario().vehicle));
  }
}
BENCHMARK(BM_IntegratorStep);

}  // namespace

BENCHMARK_MAIN();
