// SPDX-License-Identifier: Apache-2.0
//
// Serial vs OpenMP comparison for the two data-parallel kernels: the
// analytic sweep over the time grid and the per-setting count simulation.
#include <benchmark/benchmark.h>

#include "tsteer/montecarlo.hpp"
#include "tsteer/sweep.hpp"

namespace {

tsteer::SweepSpec sweep_spec(bool weight) {
  tsteer::SweepSpec spec;
  for (int i = 0; i < 24; ++i) spec.t_grid.push_back(3.0 * i / 23.0);
  spec.compute_weight = weight;
  return spec;
}

void bm_sweep_serial(benchmark::State& state) {
  const tsteer::SweepSpec spec = sweep_spec(state.range(0) != 0);
  for (auto _ : state) {
    auto rows = tsteer::run_sweep_serial(spec);
    benchmark::DoNotOptimize(rows);
  }
}
BENCHMARK(bm_sweep_serial)->Arg(0)->Arg(1);

void bm_sweep_parallel(benchmark::State& state) {
  const tsteer::SweepSpec spec = sweep_spec(state.range(0) != 0);
  for (auto _ : state) {
    auto rows = tsteer::run_sweep(spec);
    benchmark::DoNotOptimize(rows);
  }
}
BENCHMARK(bm_sweep_parallel)->Arg(0)->Arg(1);

tsteer::RunConfig simulate_config() {
  tsteer::RunConfig cfg;
  cfg.n_measurements = 3;
  cfg.shots_per_setting = 200'000;
  cfg.t_tilde = 0.5;
  return cfg;
}

void bm_simulate_serial(benchmark::State& state) {
  const tsteer::RunConfig cfg = simulate_config();
  for (auto _ : state) {
    auto records = tsteer::simulate_counts_serial(cfg);
    benchmark::DoNotOptimize(records);
  }
}
BENCHMARK(bm_simulate_serial);

void bm_simulate_parallel(benchmark::State& state) {
  const tsteer::RunConfig cfg = simulate_config();
  for (auto _ : state) {
    auto records = tsteer::simulate_counts(cfg);
    benchmark::DoNotOptimize(records);
  }
}
BENCHMARK(bm_simulate_parallel);

}  // namespace

BENCHMARK_MAIN();
