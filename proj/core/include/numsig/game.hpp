#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "numsig/net.hpp"
#include "numsig/rng.hpp"
#include "numsig/types.hpp"

namespace numsig {

struct GameConfig {
  NumberLine line;
  Vocabulary vocab;
  RewardKind reward_kind;
  NeedPrior prior;
  int batch_size = 100;
  int updates = 10000;
  double dropout_p = 0.3;
  double lr = 0.001;
  int hidden = 50;
  std::uint64_t seed = 0;

  GameConfig(RewardKind reward_kind_, NeedPrior prior_, std::uint64_t seed_,
             NumberLine line_ = {}, Vocabulary vocab_ = {});

  double keep_prob() const { return 1.0 - dropout_p; }
  void validate() const;
};

// One round: what each side saw and the shared reward.
struct Transition {
  int n;      // number given to the sender
  int w;      // word uttered
  int n_hat;  // listener's guess
  double r;   // shared reward, computed once
  DropoutMask sender_mask;
  DropoutMask listener_mask;
};

struct TrainedPair {
  AgentNet sender;
  AgentNet listener;
  GameConfig config;
  std::vector<double> reward_trace;  // mean batch reward per update
};

// Number drawn from the need prior (inverse CDF on one uniform draw).
int sample_need(const NeedPrior& prior, const NumberLine& line, Rng& rng);

// One Thompson-sampled round: fresh masks, greedy actions, shared reward.
Transition play_round(const AgentNet& sender, const AgentNet& listener, int n,
                      const NumberLine& line, RewardKind reward_kind, Rng& rng);

std::vector<Transition> play_batch(const AgentNet& sender, const AgentNet& listener,
                                   const GameConfig& config, Rng& rng);

// Initializes both agents from the config seed and runs `updates` batches,
// one Adam step per agent per batch. The sender regresses the value of
// (n, w) on r under its stored mask; the listener the value of (w, n_hat).
TrainedPair train_pair(const GameConfig& config);

// Reward trace CSV `update,mean_reward`.
void write_trace_csv(const std::vector<double>& trace, const std::filesystem::path& path);

}  // namespace numsig
