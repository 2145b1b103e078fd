#include "numsig/game.hpp"

#include <fstream>
#include <stdexcept>
#include <utility>

#include "numsig/csv.hpp"

namespace numsig {

GameConfig::GameConfig(RewardKind reward_kind_, NeedPrior prior_, std::uint64_t seed_,
                       NumberLine line_, Vocabulary vocab_)
    : line(line_), vocab(vocab_), reward_kind(reward_kind_), prior(std::move(prior_)),
      seed(seed_) {
  validate();
}

void GameConfig::validate() const {
  if (prior.size() != line.size()) throw std::invalid_argument("config: prior/line mismatch");
  if (batch_size < 1) throw std::invalid_argument("config: batch_size must be >= 1");
  if (updates < 1) throw std::invalid_argument("config: updates must be >= 1");
  if (!(dropout_p >= 0.0 && dropout_p < 1.0)) {
    throw std::invalid_argument("config: dropout must be in [0,1)");
  }
  if (hidden < 1) throw std::invalid_argument("config: hidden must be >= 1");
}

int sample_need(const NeedPrior& prior, const NumberLine& line, Rng& rng) {
  const double u = uniform01(rng);
  double cum = 0.0;
  for (int i = 0; i < prior.size(); ++i) {
    cum += prior[i];
    if (u < cum) return line.number_at(i);
  }
  return line.number_at(prior.size() - 1);  // u landed in rounding slack
}

Transition play_round(const AgentNet& sender, const AgentNet& listener, int n,
                      const NumberLine& line, RewardKind reward_kind, Rng& rng) {
  Transition t;
  t.n = n;
  t.sender_mask = sample_mask(sender.hidden_dim(), sender.dropout_keep(), rng);
  t.w = sender.act(line.index_of(n), t.sender_mask);
  t.listener_mask = sample_mask(listener.hidden_dim(), listener.dropout_keep(), rng);
  t.n_hat = line.number_at(listener.act(t.w, t.listener_mask));
  t.r = reward(reward_kind, t.n, t.n_hat, line);
  return t;
}

std::vector<Transition> play_batch(const AgentNet& sender, const AgentNet& listener,
                                   const GameConfig& config, Rng& rng) {
  std::vector<Transition> batch;
  batch.reserve(static_cast<size_t>(config.batch_size));
  for (int i = 0; i < config.batch_size; ++i) {
    const int n = sample_need(config.prior, config.line, rng);
    batch.push_back(play_round(sender, listener, n, config.line, config.reward_kind, rng));
  }
  return batch;
}

TrainedPair train_pair(const GameConfig& config) {
  config.validate();
  Rng rng(config.seed);
  const double keep = config.keep_prob();
  AgentNet sender = AgentNet::glorot(config.line.size(), config.hidden, config.vocab.size,
                                     keep, rng);
  AgentNet listener = AgentNet::glorot(config.vocab.size, config.hidden, config.line.size(),
                                       keep, rng);
  const AdamConfig adam{config.lr};

  std::vector<double> trace;
  trace.reserve(static_cast<size_t>(config.updates));
  std::vector<AgentNet::Sample> sender_samples(static_cast<size_t>(config.batch_size));
  std::vector<AgentNet::Sample> listener_samples(static_cast<size_t>(config.batch_size));

  for (int update = 0; update < config.updates; ++update) {
    const std::vector<Transition> batch = play_batch(sender, listener, config, rng);
    double mean_r = 0.0;
    for (size_t i = 0; i < batch.size(); ++i) {
      const Transition& t = batch[i];
      mean_r += t.r;
      sender_samples[i] = {config.line.index_of(t.n), t.w, t.r, t.sender_mask};
      listener_samples[i] = {t.w, config.line.index_of(t.n_hat), t.r, t.listener_mask};
    }
    mean_r /= static_cast<double>(batch.size());
    sender.train_batch(sender_samples, adam);
    listener.train_batch(listener_samples, adam);
    trace.push_back(mean_r);
  }
  return TrainedPair{std::move(sender), std::move(listener), config, std::move(trace)};
}

void write_trace_csv(const std::vector<double>& trace, const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  out << "update,mean_reward\n";
  for (size_t i = 0; i < trace.size(); ++i) {
    out << i << ',' << fmt_g(trace[i], 12) << '\n';
  }
}

}  // namespace numsig
