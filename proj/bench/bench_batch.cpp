// Serial reference vs OpenMP batch execution.
#include <benchmark/benchmark.h>

#include <vector>

#include "oracles.hpp"
#include "socindex/batch.hpp"

using namespace socindex;

namespace {

std::vector<Scenario> scenarios(int count) {
  std::vector<Scenario> out;
  for (int i = 0; i < count; ++i) {
    testing::SyntheticSpec spec;
    spec.seed = 1000 + static_cast<std::uint64_t>(i);
    spec.ratio = 0.1 + 0.1 * (i % 20);
    out.push_back(testing::make_synthetic(spec));
  }
  return out;
}

void BM_simulate_batch(benchmark::State& state, Execution exec) {
  const auto batch = scenarios(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto runs = simulate_batch(batch, Scheme::NonStandard, Mode::Absolute, exec);
    benchmark::DoNotOptimize(runs.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_epsilon_sweep(benchmark::State& state, Execution exec) {
  testing::SyntheticSpec spec;
  spec.plant_input = 0.6;
  spec.manure_input = 0.4;
  spec.fym = FymPolicy::Controlled;
  const auto s = testing::make_synthetic(spec);
  std::vector<double> eps;
  for (int i = 0; i < state.range(0); ++i) eps.push_back(0.9 * i / state.range(0));
  for (auto _ : state) {
    auto runs = epsilon_sweep(s, eps, Scheme::NonStandard, exec);
    benchmark::DoNotOptimize(runs.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK_CAPTURE(BM_simulate_batch, serial, Execution::Serial)->Arg(16)->Arg(128);
BENCHMARK_CAPTURE(BM_simulate_batch, parallel, Execution::Parallel)->Arg(16)->Arg(128);
BENCHMARK_CAPTURE(BM_epsilon_sweep, serial, Execution::Serial)->Arg(32);
BENCHMARK_CAPTURE(BM_epsilon_sweep, parallel, Execution::Parallel)->Arg(32);

BENCHMARK_MAIN();
