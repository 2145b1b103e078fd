#include <benchmark/benchmark.h>

#include "numsig/net.hpp"

using namespace numsig;

static void BM_Forward(benchmark::State& state) {
  Rng rng(1);
  const AgentNet net = AgentNet::glorot(20, 50, 10, 0.7, rng);
  const DropoutMask mask = sample_mask(50, 0.7, rng);
  int input = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(net.forward(input, &mask));
    input = (input + 1) % 20;
  }
}
BENCHMARK(BM_Forward);

static void BM_TrainBatch(benchmark::State& state) {
  Rng rng(2);
  AgentNet net = AgentNet::glorot(20, 50, 10, 0.7, rng);
  std::vector<AgentNet::Sample> batch;
  for (int i = 0; i < 100; ++i) {
    batch.push_back({uniform_int(rng, 20), uniform_int(rng, 10), uniform01(rng),
                     sample_mask(50, 0.7, rng)});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(net.train_batch(batch));
  }
}
BENCHMARK(BM_TrainBatch);
