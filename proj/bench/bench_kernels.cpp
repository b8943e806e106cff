// Serial reference versus OpenMP path for each parallel kernel, plus IncMerge scaling.

#include <benchmark/benchmark.h>

#include <random>

#include "powersched/curve.hpp"
#include "powersched/flow_uni.hpp"
#include "powersched/makespan_uni.hpp"
#include "powersched/oracle.hpp"

using namespace powersched;

namespace {

Instance sorted_instance(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> gap(0.0, 2.0), work(0.1, 3.0);
  std::vector<Job> jobs(n);
  double r = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    jobs[i] = {r, work(rng), i + 1};
    r += gap(rng);
  }
  return Instance(std::move(jobs), 3.0);
}

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void BM_SampleFrontier(benchmark::State& state) {
  const Frontier f = build_frontier(sorted_instance(2000, 1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_frontier(f, 1.0, 1e5, 100000, mode(state)));
  }
}
BENCHMARK(BM_SampleFrontier)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_PinnedScan(benchmark::State& state) {
  const Instance three({{0, 1, 1}, {0, 1, 2}, {1, 1, 3}}, 3.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pinned_regime_bounds(three, {}, {1.0, 100.0, 1024}, mode(state)));
  }
}
BENCHMARK(BM_PinnedScan)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_EnumerateAssignments(benchmark::State& state) {
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < 8; ++i) jobs.push_back({0.5 * static_cast<double>(i), 1.0, i + 1});
  const Instance inst(jobs, 3.0, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_assignments(inst, 12.0, Metric::makespan, {}, mode(state)));
  }
}
BENCHMARK(BM_EnumerateAssignments)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_IncMerge(benchmark::State& state) {
  const Instance inst = sorted_instance(static_cast<std::size_t>(state.range(0)), 2);
  const double e = inst.total_work();
  for (auto _ : state) benchmark::DoNotOptimize(inc_merge(inst, e));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_IncMerge)->RangeMultiplier(10)->Range(1000, 1000000)->Complexity(benchmark::oN)
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
