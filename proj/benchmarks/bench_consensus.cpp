#include <benchmark/benchmark.h>

#include "numsig/consensus.hpp"

using namespace numsig;

static void BM_CorrelationCluster(benchmark::State& state) {
  AgreementMatrix m(20);
  Rng init(8);
  for (int s = 0; s < 60; ++s) {
    NumeralSystem system;
    const int k = 1 + uniform_int(init, 8);
    for (int i = 0; i < 20; ++i) system.assignment.push_back(uniform_int(init, k));
    m.accumulate(system);
  }
  for (auto _ : state) {
    Rng rng(9);
    benchmark::DoNotOptimize(correlation_cluster(m, static_cast<int>(state.range(0)), rng));
  }
}
BENCHMARK(BM_CorrelationCluster)->Arg(5)->Arg(50);
