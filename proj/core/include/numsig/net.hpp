#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "numsig/rng.hpp"

namespace numsig {

// One Thompson sample of the value network: per-hidden-unit keep bits.
struct DropoutMask {
  std::vector<std::uint8_t> keep;  // 1 = keep, 0 = drop
};

// I.i.d. Bernoulli(keep_prob) keep bits; keep_prob in (0, 1].
DropoutMask sample_mask(int size, double keep_prob, Rng& rng);

struct AdamConfig {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// One bias-corrected Adam update. `step` is the step counter after the
// update (so pass 0-initialized state on first use).
void adam_step(std::span<double> params, std::span<const double> grads, std::span<double> m,
               std::span<double> v, std::int64_t& step, const AdamConfig& config = {});

// One-hidden-layer value network: one-hot input, ReLU hidden layer with
// inverted dropout, linear output head per action. Holds its own Adam state.
class AgentNet {
 public:
  struct Sample {
    int input_index;
    int action_index;
    double reward;
    DropoutMask mask;  // the mask active when the action was chosen
  };

  // Zero parameters, zero optimizer state.
  AgentNet(int in_dim, int hidden_dim, int out_dim, double dropout_keep);

  // Glorot-uniform weights (+-sqrt(6/(fan_in+fan_out))), zero biases.
  static AgentNet glorot(int in_dim, int hidden_dim, int out_dim, double dropout_keep, Rng& rng);

  int in_dim() const { return in_; }
  int hidden_dim() const { return hidden_; }
  int out_dim() const { return out_; }
  double dropout_keep() const { return keep_; }
  std::int64_t steps() const { return step_; }

  // Action values at a one-hot input. With a mask, hidden activations are
  // zeroed and the survivors scaled by 1/keep (inverted dropout); without,
  // the full network is evaluated unscaled.
  std::vector<double> forward(int input_index, const DropoutMask* mask = nullptr) const;

  // Greedy action under the sampled model; ties break to the lowest index.
  int act(int input_index, const DropoutMask& mask) const;

  // MSE regression of the taken action's value onto the observed reward,
  // each sample evaluated under its stored mask; one Adam step. Returns the
  // pre-step batch loss.
  double train_batch(std::span<const Sample> batch, const AdamConfig& config = {});

  // Flat parameter vector [W1 | b1 | W2 | b2]; mutable view is for tests
  // and hand-constructed agents.
  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }
  std::span<double> w1() { return {params_.data(), static_cast<size_t>(hidden_) * in_}; }
  std::span<double> b1() { return {params_.data() + hidden_ * in_, static_cast<size_t>(hidden_)}; }
  std::span<double> w2() {
    return {params_.data() + hidden_ * in_ + hidden_, static_cast<size_t>(out_) * hidden_};
  }
  std::span<double> b2() {
    return {params_.data() + hidden_ * in_ + hidden_ + out_ * hidden_, static_cast<size_t>(out_)};
  }

  // Batch gradients of the most recent train_batch, evaluated at the
  // pre-step parameters.
  std::span<const double> last_gradients() const { return grads_; }

  // Text checkpoint: `numsig-net 1` magic, dims + step header, then the
  // parameter and moment arrays at full precision.
  void save(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
  static AgentNet load(std::istream& in);
  static AgentNet load(const std::filesystem::path& path);

  // Compares learned state (dims, parameters, moments, step), not scratch.
  bool operator==(const AgentNet& other) const {
    return in_ == other.in_ && hidden_ == other.hidden_ && out_ == other.out_ &&
           keep_ == other.keep_ && params_ == other.params_ && m_ == other.m_ &&
           v_ == other.v_ && step_ == other.step_;
  }

 private:
  int in_, hidden_, out_;
  double keep_;
  std::vector<double> params_, m_, v_;
  std::vector<double> grads_;  // scratch, same layout as params_
  std::int64_t step_ = 0;

  size_t w1_at(int h, int i) const { return static_cast<size_t>(h) * in_ + i; }
  size_t b1_at(int h) const { return static_cast<size_t>(hidden_) * in_ + h; }
  size_t w2_at(int o, int h) const {
    return static_cast<size_t>(hidden_) * in_ + hidden_ + static_cast<size_t>(o) * hidden_ + h;
  }
  size_t b2_at(int o) const {
    return static_cast<size_t>(hidden_) * in_ + hidden_ + static_cast<size_t>(out_) * hidden_ + o;
  }
};

// Lowest-index argmax.
int argmax_lowest(std::span<const double> values);

}  // namespace numsig
