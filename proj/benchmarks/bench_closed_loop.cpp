#include "smcbf/experiments.hpp"
#include "smcbf/sim.hpp"

#include <benchmark/benchmark.h>

#include <string>

namespace {

// Runs up to one simulated second past the filter enable time; items are
// control steps.
void BM_ClosedLoop(benchmark::State& state, const std::string& id) {
  smcbf::sim::Scenario s = smcbf::sim::make_experiment(id);
  s.duration = s.barrier_enable_time + 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(smcbf::sim::run_closed_loop(s));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(s.num_steps()));
}
BENCHMARK_CAPTURE(BM_ClosedLoop, furuta_smcbf, std::string("furuta-smcbf-real"))
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_ClosedLoop, maglev_smcbf, std::string("maglev-smcbf-real"))
    ->Unit(benchmark::kMillisecond);

}  // namespace
