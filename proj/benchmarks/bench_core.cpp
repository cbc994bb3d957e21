#include <benchmark/benchmark.h>

#include "polyprophet/adversary.hpp"
#include "polyprophet/harness.hpp"
#include "polyprophet/maxflow.hpp"
#include "polyprophet/polymatroid.hpp"
#include "polyprophet/prophet.hpp"

using namespace polyprophet;

namespace {

ExperimentConfig bench_config() {
  ExperimentConfig config;
  PositionAuctionSpec pa;
  pa.n_agents = 3;
  pa.instances.push_back({{3, 2, 1}, {0, 1, 2}});
  config.submodular = SubmodularSpec::position_auction(pa);
  config.distributions = {
      DistributionSpec::discrete({{0.5, 0.5}, {2.0, 0.5}}),
      DistributionSpec::discrete({{0.0, 0.25}, {1.0, 0.5}, {3.0, 0.25}}),
      DistributionSpec::discrete({{1.0, 0.5}, {2.5, 0.5}})};
  config.adversary = {AdversaryKind::kUniformRandomOrder, {}};
  config.estimator = {EstimatorMode::kExact, 4096, true};
  config.trials = 1000;
  config.seed = 1;
  return config;
}

}  // namespace

static void BM_GValue(benchmark::State& state) {
  const auto config = bench_config();
  const auto m = BlockMatroid::build(config.submodular);
  const std::vector<double> wp = {2.0, 3.0, 1.0};
  const CardinalityVector a(m.num_blocks(), 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(m.g_value(a, wp));
  }
}
BENCHMARK(BM_GValue);

static void BM_ThresholdExactCached(benchmark::State& state) {
  const auto config = bench_config();
  const auto m = BlockMatroid::build(config.submodular);
  ThresholdOracle oracle(m, WPrimeEnsemble::exact(config.distributions));
  const CardinalityVector a(m.num_blocks(), 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle.threshold(a, 0));
  }
}
BENCHMARK(BM_ThresholdExactCached);

static void BM_ThresholdExactCold(benchmark::State& state) {
  const auto config = bench_config();
  const auto m = BlockMatroid::build(config.submodular);
  const auto ens = WPrimeEnsemble::exact(config.distributions);
  const CardinalityVector a(m.num_blocks(), 0);
  for (auto _ : state) {
    ThresholdOracle oracle(m, ens);
    benchmark::DoNotOptimize(oracle.threshold(a, 0));
  }
}
BENCHMARK(BM_ThresholdExactCold);

static void BM_PolymatroidTrial(benchmark::State& state) {
  const auto config = bench_config();
  const auto m = BlockMatroid::build(config.submodular);
  ThresholdOracle oracle(m, WPrimeEnsemble::exact(config.distributions));
  uint64_t trial = 0;
  for (auto _ : state) {
    RandomSource rng(config.seed, trial++);
    auto w_rng = rng.fork(1);
    const WeightAssignment w = sample_assignment(config.distributions, w_rng);
    auto policy = make_policy(config.adversary, m.num_blocks(), config.distributions,
                              rng.fork(2));
    benchmark::DoNotOptimize(run_polymatroid(m, w, *policy, oracle));
  }
}
BENCHMARK(BM_PolymatroidTrial);

static void BM_GreedyMax(benchmark::State& state) {
  const auto config = bench_config();
  const WeightAssignment w = {2.0, 1.0, 3.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(greedy_max(config.submodular, w));
  }
}
BENCHMARK(BM_GreedyMax);

static void BM_RunExperiment1k(benchmark::State& state) {
  const auto config = bench_config();
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_experiment(config, 1));
  }
}
BENCHMARK(BM_RunExperiment1k)->Unit(benchmark::kMillisecond);

static void BM_MaxFlowLadder(benchmark::State& state) {
  const int rungs = static_cast<int>(state.range(0));
  MaxFlowGraph g(2 * rungs + 2);
  const int s = 2 * rungs, t = 2 * rungs + 1;
  for (int i = 0; i < rungs; ++i) {
    g.add_edge(s, i, 3);
    g.add_edge(i, rungs + i, 2);
    g.add_edge(rungs + i, t, 3);
    if (i + 1 < rungs) g.add_edge(i, i + 1, 1);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(g.max_flow(s, t));
  }
}
BENCHMARK(BM_MaxFlowLadder)->Arg(8)->Arg(64);

BENCHMARK_MAIN();
