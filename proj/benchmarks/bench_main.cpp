#include <benchmark/benchmark.h>

#include "dqdwtd/dqd_oc_model.hpp"
#include "dqdwtd/liouvillian.hpp"
#include "dqdwtd/operator_algebra.hpp"
#include "dqdwtd/trajectory.hpp"
#include "dqdwtd/wtd_engine.hpp"

using namespace dqdwtd;

namespace {

PhotonScenario scenario(int photons) {
  return photon_scenario(ModelParams::from_dimensionless(5.0, 10.0, photons), photons);
}

}  // namespace

static void BM_ExpmNoJump(benchmark::State& state) {
  const PhotonScenario s = scenario(static_cast<int>(state.range(0)));
  const Matrix& l0 = s.engine.split().no_jump.matrix();
  for (auto _ : state) benchmark::DoNotOptimize(expm(l0, 2.5));
}
BENCHMARK(BM_ExpmNoJump)->Arg(1)->Arg(2);

static void BM_MinNormSolve(benchmark::State& state) {
  const PhotonScenario s = scenario(static_cast<int>(state.range(0)));
  const Matrix& l0 = s.engine.split().no_jump.matrix();
  const Vector rho = s.initial.vectorized();
  for (auto _ : state) {
    const MinNormSolver solver(l0);
    benchmark::DoNotOptimize(solver.solve(rho));
  }
}
BENCHMARK(BM_MinNormSolve)->Arg(1)->Arg(2);

static void BM_BuildScenario(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(scenario(2));
}
BENCHMARK(BM_BuildScenario);

static void BM_FirstJumpTable(benchmark::State& state) {
  const PhotonScenario s = scenario(1);
  for (auto _ : state) benchmark::DoNotOptimize(s.engine.first_jump_table(s.initial));
}
BENCHMARK(BM_FirstJumpTable);

static void BM_TwoJumpTable(benchmark::State& state) {
  const PhotonScenario s = scenario(2);
  for (auto _ : state) benchmark::DoNotOptimize(s.engine.two_jump_table(s.initial));
}
BENCHMARK(BM_TwoJumpTable);

static void BM_MeanFirstJumpTime(benchmark::State& state) {
  const PhotonScenario s = scenario(2);
  for (auto _ : state) benchmark::DoNotOptimize(s.engine.mean_first_jump_time(s.initial));
}
BENCHMARK(BM_MeanFirstJumpTime);

static void BM_DysonDecomposition(benchmark::State& state) {
  const int photons = static_cast<int>(state.range(0));
  const PhotonScenario s = scenario(photons);
  for (auto _ : state) {
    benchmark::DoNotOptimize(jump_number_decomposition(s.engine.split(), s.initial, 2.0, photons + 1));
  }
}
BENCHMARK(BM_DysonDecomposition)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_Ensemble(benchmark::State& state) {
  const ModelParams p = ModelParams::from_dimensionless(5.0, 10.0, 2);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_ensemble(p, 2, n, 7, 200.0));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_Ensemble)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
