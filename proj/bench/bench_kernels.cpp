// Serial reference kernels against their OpenMP counterparts.
// LEXIRANK_THREADS sets the parallel width.

#include <benchmark/benchmark.h>

#include <numeric>

#include "lexirank/analytics.hpp"
#include "lexirank/robustness.hpp"

using namespace lexirank;

namespace {

RelevantPositions spread(std::size_t m, std::int64_t d) {
  std::vector<Position> v(m);
  for (std::size_t i = 0; i < m; ++i) v[i] = static_cast<Position>(1 + i * (d / m));
  return RelevantPositions::from_positions(v, d);
}

template <bool Parallel>
void worst_user(benchmark::State& state) {
  const auto r = spread(static_cast<std::size_t>(state.range(0)), 1000);
  const auto metric = LevelMetric::ap();
  for (auto _ : state) {
    auto w = Parallel ? worst_case_user(metric, r) : serial::worst_case_user(metric, r);
    benchmark::DoNotOptimize(w.value);
  }
}

template <bool Parallel>
void ranker(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto metric = LevelMetric::ndcg();
  for (auto _ : state) {
    auto r = Parallel ? optimal_ranker_worst_case(metric, 30, m)
                      : serial::optimal_ranker_worst_case(metric, 30, m);
    benchmark::DoNotOptimize(r.stochastic);
  }
}

SimulationConfig sim_config() {
  SimulationConfig c;
  c.corpus_size = 1000000;
  c.pair_count = 10000;
  c.seed = 3;
  return c;
}

template <bool Parallel>
void simulate(benchmark::State& state) {
  const auto c = sim_config();
  for (auto _ : state) {
    auto pairs = Parallel ? simulate_pairs(c) : serial::simulate_pairs(c);
    benchmark::DoNotOptimize(pairs.data());
  }
}

template <bool Parallel>
void agreement(benchmark::State& state) {
  const auto pairs = simulate_pairs(sim_config());
  for (auto _ : state) {
    auto a = Parallel ? agreement_with_worst_case(pairs, MetricId::ap())
                      : serial::agreement_with_worst_case(pairs, MetricId::ap());
    benchmark::DoNotOptimize(a.agreeing);
  }
}

}  // namespace

BENCHMARK(worst_user<false>)->Name("worst_case_user/serial")->Arg(12)->Arg(16);
BENCHMARK(worst_user<true>)->Name("worst_case_user/omp")->Arg(12)->Arg(16);
BENCHMARK(ranker<false>)->Name("optimal_ranker/serial")->Arg(6)->Arg(7);
BENCHMARK(ranker<true>)->Name("optimal_ranker/omp")->Arg(6)->Arg(7);
BENCHMARK(simulate<false>)->Name("simulate_pairs/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(simulate<true>)->Name("simulate_pairs/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(agreement<false>)->Name("agreement/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(agreement<true>)->Name("agreement/omp")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
