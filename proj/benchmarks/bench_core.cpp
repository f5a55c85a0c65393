#include <benchmark/benchmark.h>

#include "hubofs/dataset.hpp"
#include "hubofs/dcqo.hpp"
#include "hubofs/hubo.hpp"
#include "hubofs/mi.hpp"
#include "hubofs/samplers.hpp"
#include "support/random_hubo.hpp"
#include "support/synthetic.hpp"

using namespace hubofs;

static void BM_Energy(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto c = testing::random_hubo(n, 1);
  Xoshiro256 rng(2);
  std::vector<std::int8_t> z(n);
  for (auto& s : z) s = rng.random_spin();
  for (auto _ : state) benchmark::DoNotOptimize(energy(c, z));
  state.counters["terms"] = static_cast<double>(n + c.j_terms.size() + c.k_terms.size());
}
BENCHMARK(BM_Energy)->Arg(8)->Arg(16)->Arg(32);

static void BM_Exhaustive(benchmark::State& state) {
  const auto c = testing::random_hubo(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(exhaustive_solve(c, 1));
}
BENCHMARK(BM_Exhaustive)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_Annealing(benchmark::State& state) {
  const auto c = testing::random_hubo(static_cast<std::size_t>(state.range(0)), 4);
  AnnealingParams p;
  p.shots = 64;
  p.sweeps = 500;
  for (auto _ : state) benchmark::DoNotOptimize(simulated_annealing(c, p));
}
BENCHMARK(BM_Annealing)->Arg(12)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_ComputeTensors(benchmark::State& state) {
  testing::RedundancySpec spec;
  spec.samples = static_cast<std::size_t>(state.range(0));
  const auto dd = discretize(testing::redundancy_dataset(spec), kDefaultMaxBins);
  for (auto _ : state) benchmark::DoNotOptimize(compute_tensors(dd));
}
BENCHMARK(BM_ComputeTensors)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_DcqoEvolve(benchmark::State& state) {
  const auto c = testing::random_hubo(static_cast<std::size_t>(state.range(0)), 5);
  const auto sched = build_schedule(50, 10.0);
  for (auto _ : state) benchmark::DoNotOptimize(evolve(c, sched, CdMode::full));
}
BENCHMARK(BM_DcqoEvolve)->Arg(8)->Arg(14)->Arg(18)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
