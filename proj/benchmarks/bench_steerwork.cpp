#include <benchmark/benchmark.h>

#include "steerwork/bounds.hpp"
#include "steerwork/game.hpp"
#include "steerwork/lhs.hpp"
#include "steerwork/mub.hpp"

using namespace steerwork;

static void BM_BuildMub(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_mub(d, d + 1));
}
BENCHMARK(BM_BuildMub)->Arg(3)->Arg(7)->Arg(13)->Arg(23);

static void BM_VerifyMub(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const MubSet set = build_mub(d, d + 1);
  for (auto _ : state) benchmark::DoNotOptimize(verify_mub(set, 1e-10));
}
BENCHMARK(BM_VerifyMub)->Arg(7)->Arg(23);

static void BM_ExactQuantum(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_exact_quantum({d, d + 1, 1.0, 1.0, 0, 0}));
}
BENCHMARK(BM_ExactQuantum)->Arg(2)->Arg(3)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

static void BM_MonteCarlo(benchmark::State& state) {
  const auto shots = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_monte_carlo({2, 3, 1.0, 1.0, shots, 7}));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * shots));
}
BENCHMARK(BM_MonteCarlo)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_Optimizer(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const MubSet set = build_mub(d, d + 1);
  for (auto _ : state) benchmark::DoNotOptimize(optimize_single_state(set));
}
BENCHMARK(BM_Optimizer)->Arg(2)->Arg(5)->Arg(11)->Unit(benchmark::kMillisecond);

static void BM_BlochGrid(benchmark::State& state) {
  const MubSet set = build_mub(2, 3);
  const auto res = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bloch_grid_search(set, res));
}
BENCHMARK(BM_BlochGrid)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

static void BM_Bounds(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(compute_bounds(23, 24, 1.0, 1.0));
}
BENCHMARK(BM_Bounds);

BENCHMARK_MAIN();
