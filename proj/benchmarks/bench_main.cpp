#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "belief_hjb/hjb_grid.hpp"
#include "belief_hjb/kalman_nd.hpp"
#include "belief_hjb/obs_update.hpp"
#include "belief_hjb/solver.hpp"

using namespace belief_hjb;

namespace {

Grid scaled_grid(int refine) {
  Grid g;
  g.n_m = 20 * refine + 1;
  g.n_z = 10 * refine + 1;
  return g;
}

void BM_StepBackward(benchmark::State& state) {
  const Grid g = scaled_grid(static_cast<int>(state.range(0)));
  const ModelParams p;
  SolverConfig cfg;
  cfg.dt = 0.0125 / static_cast<double>(state.range(0));
  const auto layer = ValueField::terminal(g, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(step_backward(layer, p, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_StepBackward)->Arg(1)->Arg(2)->Arg(4);

void BM_ObservationUpdate(benchmark::State& state) {
  const Grid g;
  const ModelParams p;
  const auto rule = QuadratureRule::gauss_hermite(static_cast<int>(state.range(0)));
  const auto layer = ValueField::terminal(g, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(apply_observation_update(layer, p, rule));
}
BENCHMARK(BM_ObservationUpdate)->Arg(10)->Arg(20)->Arg(40);

void BM_FullSolve(benchmark::State& state) {
  const int refine = static_cast<int>(state.range(0));
  const Grid g = scaled_grid(refine);
  const ModelParams p;
  SolveOptions opts;
  opts.solver.dt = 0.0125 / refine;
  opts.keep_layers = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_value_function(g, p, Regime::kNoisyObservations, opts));
  }
}
BENCHMARK(BM_FullSolve)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_KalmanUpdate(benchmark::State& state) {
  const auto d = state.range(0);
  const Eigen::MatrixXd a = Eigen::MatrixXd::Random(d, d);
  const NdBelief b{Eigen::VectorXd::Zero(d), a * a.transpose()};
  const Eigen::MatrixXd h = Eigen::MatrixXd::Identity(d / 2 + 1, d);
  const Eigen::VectorXd y = Eigen::VectorXd::Ones(h.rows());
  for (auto _ : state) benchmark::DoNotOptimize(kalman_update(b, h, 0.9, y));
}
BENCHMARK(BM_KalmanUpdate)->Arg(2)->Arg(8)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
