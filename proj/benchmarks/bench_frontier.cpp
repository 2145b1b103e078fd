#include <benchmark/benchmark.h>

#include "numsig/frontier.hpp"
#include "numsig/priors.hpp"

using namespace numsig;

static void BM_OptimizeExact(benchmark::State& state) {
  const NeedPrior prior = uniform_prior(NumberLine());
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) {
    Rng rng(6);
    benchmark::DoNotOptimize(optimize_exact(k, prior, OptMode::kBest, 10, rng));
  }
}
BENCHMARK(BM_OptimizeExact)->Arg(3)->Arg(6)->Arg(10);

static void BM_OptimizeApprox(benchmark::State& state) {
  const NeedPrior prior = uniform_prior(NumberLine());
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) {
    Rng rng(7);
    benchmark::DoNotOptimize(optimize_approx(k, prior, OptMode::kBest, 3, 0.31, rng));
  }
}
BENCHMARK(BM_OptimizeApprox)->Arg(3)->Arg(6);
