#include "numsig/net.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include "numsig/csv.hpp"

namespace numsig {

DropoutMask sample_mask(int size, double keep_prob, Rng& rng) {
  if (!(keep_prob > 0.0 && keep_prob <= 1.0)) {
    throw std::domain_error("sample_mask: keep_prob must be in (0,1]");
  }
  DropoutMask mask;
  mask.keep.resize(static_cast<size_t>(size));
  for (int i = 0; i < size; ++i) mask.keep[i] = bernoulli(rng, keep_prob) ? 1 : 0;
  return mask;
}

void adam_step(std::span<double> params, std::span<const double> grads, std::span<double> m,
               std::span<double> v, std::int64_t& step, const AdamConfig& config) {
  const size_t p = params.size();
  if (grads.size() != p || m.size() != p || v.size() != p) {
    throw std::invalid_argument("adam_step: shape mismatch");
  }
  ++step;
  const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(step));
  const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(step));
  for (size_t i = 0; i < p; ++i) {
    m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * grads[i];
    v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * grads[i] * grads[i];
    const double m_hat = m[i] / bc1;
    const double v_hat = v[i] / bc2;
    params[i] -= config.lr * m_hat / (std::sqrt(v_hat) + config.eps);
  }
}

AgentNet::AgentNet(int in_dim, int hidden_dim, int out_dim, double dropout_keep)
    : in_(in_dim), hidden_(hidden_dim), out_(out_dim), keep_(dropout_keep) {
  if (in_ < 1 || hidden_ < 1 || out_ < 1) throw std::invalid_argument("AgentNet: bad dims");
  if (!(keep_ > 0.0 && keep_ <= 1.0)) throw std::invalid_argument("AgentNet: bad keep prob");
  const size_t p = static_cast<size_t>(hidden_) * in_ + hidden_ +
                   static_cast<size_t>(out_) * hidden_ + out_;
  params_.assign(p, 0.0);
  m_.assign(p, 0.0);
  v_.assign(p, 0.0);
  grads_.assign(p, 0.0);
}

AgentNet AgentNet::glorot(int in_dim, int hidden_dim, int out_dim, double dropout_keep,
                          Rng& rng) {
  AgentNet net(in_dim, hidden_dim, out_dim, dropout_keep);
  const double lim1 = std::sqrt(6.0 / (in_dim + hidden_dim));
  for (double& w : net.w1()) w = uniform_real(rng, -lim1, lim1);
  const double lim2 = std::sqrt(6.0 / (hidden_dim + out_dim));
  for (double& w : net.w2()) w = uniform_real(rng, -lim2, lim2);
  return net;
}

std::vector<double> AgentNet::forward(int input_index, const DropoutMask* mask) const {
  if (input_index < 0 || input_index >= in_) {
    throw std::domain_error("forward: input index out of range");
  }
  if (mask && static_cast<int>(mask->keep.size()) != hidden_) {
    throw std::invalid_argument("forward: mask size mismatch");
  }
  std::vector<double> h(static_cast<size_t>(hidden_));
  for (int j = 0; j < hidden_; ++j) {
    double a = params_[w1_at(j, input_index)] + params_[b1_at(j)];
    a = a > 0.0 ? a : 0.0;
    if (mask) a = mask->keep[j] ? a / keep_ : 0.0;
    h[j] = a;
  }
  std::vector<double> out(static_cast<size_t>(out_));
  for (int o = 0; o < out_; ++o) {
    double y = params_[b2_at(o)];
    for (int j = 0; j < hidden_; ++j) y += params_[w2_at(o, j)] * h[j];
    out[o] = y;
  }
  return out;
}

int AgentNet::act(int input_index, const DropoutMask& mask) const {
  return argmax_lowest(forward(input_index, &mask));
}

double AgentNet::train_batch(std::span<const Sample> batch, const AdamConfig& config) {
  if (batch.empty()) throw std::invalid_argument("train_batch: empty batch");
  std::fill(grads_.begin(), grads_.end(), 0.0);

  const double inv_m = 1.0 / static_cast<double>(batch.size());
  double loss = 0.0;
  std::vector<double> h(static_cast<size_t>(hidden_));
  std::vector<std::uint8_t> active(static_cast<size_t>(hidden_));

  for (const Sample& s : batch) {
    if (s.input_index < 0 || s.input_index >= in_ || s.action_index < 0 ||
        s.action_index >= out_) {
      throw std::domain_error("train_batch: sample index out of range");
    }
    if (static_cast<int>(s.mask.keep.size()) != hidden_) {
      throw std::invalid_argument("train_batch: mask size mismatch");
    }
    for (int j = 0; j < hidden_; ++j) {
      const double pre = params_[w1_at(j, s.input_index)] + params_[b1_at(j)];
      const bool on = pre > 0.0 && s.mask.keep[j];
      active[j] = on ? 1 : 0;
      h[j] = on ? pre / keep_ : 0.0;
    }
    const int a = s.action_index;
    double y = params_[b2_at(a)];
    for (int j = 0; j < hidden_; ++j) y += params_[w2_at(a, j)] * h[j];

    const double err = y - s.reward;
    loss += err * err * inv_m;

    const double g = 2.0 * err * inv_m;
    grads_[b2_at(a)] += g;
    for (int j = 0; j < hidden_; ++j) {
      grads_[w2_at(a, j)] += g * h[j];
      if (active[j]) {
        const double dpre = g * params_[w2_at(a, j)] / keep_;
        grads_[b1_at(j)] += dpre;
        grads_[w1_at(j, s.input_index)] += dpre;
      }
    }
  }

  adam_step(params_, grads_, m_, v_, step_, config);
  return loss;
}

namespace {

void write_array(std::ostream& out, const char* name, std::span<const double> values) {
  out << name;
  for (double v : values) out << ' ' << fmt_g(v, 17);
  out << '\n';
}

std::vector<double> read_array(std::istream& in, const std::string& expected, size_t count) {
  std::string name;
  if (!(in >> name) || name != expected) {
    throw std::runtime_error("net checkpoint: expected array '" + expected + "'");
  }
  std::vector<double> values(count);
  for (size_t i = 0; i < count; ++i) {
    if (!(in >> values[i])) throw std::runtime_error("net checkpoint: truncated array");
  }
  return values;
}

}  // namespace

void AgentNet::save(std::ostream& out) const {
  out << "numsig-net 1\n";
  out << in_ << ' ' << hidden_ << ' ' << out_ << ' ' << fmt_g(keep_, 17) << ' ' << step_ << '\n';
  write_array(out, "params", params_);
  write_array(out, "m", m_);
  write_array(out, "v", v_);
}

void AgentNet::save(const std::filesystem::path& path) const {
  std::ofstream out = open_output(path);
  save(out);
}

AgentNet AgentNet::load(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "numsig-net" || version != 1) {
    throw std::runtime_error("net checkpoint: bad header");
  }
  int in_dim = 0, hidden = 0, out_dim = 0;
  double keep = 0.0;
  std::int64_t step = 0;
  if (!(in >> in_dim >> hidden >> out_dim >> keep >> step)) {
    throw std::runtime_error("net checkpoint: bad dims line");
  }
  AgentNet net(in_dim, hidden, out_dim, keep);
  const size_t p = net.params_.size();
  net.params_ = read_array(in, "params", p);
  net.m_ = read_array(in, "m", p);
  net.v_ = read_array(in, "v", p);
  net.step_ = step;
  return net;
}

AgentNet AgentNet::load(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return load(in);
}

int argmax_lowest(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("argmax_lowest: empty");
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

}  // namespace numsig
