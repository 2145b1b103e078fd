#include <benchmark/benchmark.h>

#include "numsig/analysis.hpp"
#include "numsig/priors.hpp"
#include "numsig/rng.hpp"

using namespace numsig;

static void BM_CommCost(benchmark::State& state) {
  Rng rng(3);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 20; ++i) {
    std::vector<double> row(10);
    double sum = 0.0;
    for (double& v : row) {
      v = uniform01(rng) + 1e-3;
      sum += v;
    }
    for (double& v : row) v /= sum;
    rows.push_back(row);
  }
  const NamingDistribution naming = NamingDistribution::from_rows(rows);
  const NeedPrior prior = uniform_prior(NumberLine());
  for (auto _ : state) {
    benchmark::DoNotOptimize(comm_cost(naming, prior));
  }
}
BENCHMARK(BM_CommCost);

static void BM_EstimateNaming(benchmark::State& state) {
  Rng init(4);
  const AgentNet sender = AgentNet::glorot(20, 50, 10, 0.7, init);
  for (auto _ : state) {
    Rng rng(5);
    benchmark::DoNotOptimize(estimate_naming(sender, 100, rng));
  }
}
BENCHMARK(BM_EstimateNaming);
