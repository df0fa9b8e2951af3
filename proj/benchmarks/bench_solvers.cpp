#include <benchmark/benchmark.h>

#include "qcpto/baselines.hpp"
#include "qcpto/exact.hpp"
#include "qcpto/heuristic.hpp"
#include "qcpto/sim.hpp"

using namespace qcpto;

namespace {

void BM_Heuristic(benchmark::State& state) {
  const QmkpInstance inst = make_snapshot_instance(static_cast<int>(state.range(0)), 8, 1);
  for (auto _ : state) benchmark::DoNotOptimize(solve_heuristic(inst).objective);
}
BENCHMARK(BM_Heuristic)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMicrosecond);

// Small queues only: the exact search grows exponentially with n.
void BM_Exact(benchmark::State& state) {
  const QmkpInstance inst = make_snapshot_instance(static_cast<int>(state.range(0)), 8, 1);
  for (auto _ : state) benchmark::DoNotOptimize(solve_exact(inst).objective);
}
BENCHMARK(BM_Exact)->Arg(6)->Arg(10)->Arg(14)->Unit(benchmark::kMicrosecond);

void BM_Cpto(benchmark::State& state) {
  const QmkpInstance inst = make_snapshot_instance(40, 8, 1);
  for (auto _ : state) benchmark::DoNotOptimize(solve_cpto(inst).assigned_count());
}
BENCHMARK(BM_Cpto);

void BM_SimulationEpochs(benchmark::State& state) {
  SimConfig cfg;
  cfg.scenario.num_vehicles = 40;
  const Trace trace = scenario_trace(cfg);
  const auto workers = make_workers(cfg.scenario.region, cfg.workers, cfg.seed);
  const auto scheme = static_cast<Scheme>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_simulation(trace, workers, scheme, cfg).report.epochs);
  state.SetLabel(std::string(to_string(scheme)));
}
BENCHMARK(BM_SimulationEpochs)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
