#include "numsig/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace numsig {

std::string to_string(SystemKind kind) {
  return kind == SystemKind::kExact ? "exact" : "approximate";
}

NamingDistribution estimate_naming(const AgentNet& sender, int m, Rng& rng) {
  if (m < 1) throw std::invalid_argument("estimate_naming: m must be >= 1");
  const int n = sender.in_dim();
  const int k = sender.out_dim();
  std::vector<int> counts(static_cast<size_t>(n) * k, 0);
  for (int i = 0; i < n; ++i) {
    for (int round = 0; round < m; ++round) {
      const DropoutMask mask = sample_mask(sender.hidden_dim(), sender.dropout_keep(), rng);
      const int w = sender.act(i, mask);
      counts[static_cast<size_t>(i) * k + w] += 1;
    }
  }
  std::vector<double> flat(counts.size());
  for (size_t j = 0; j < counts.size(); ++j) {
    flat[j] = static_cast<double>(counts[j]) / static_cast<double>(m);
  }
  return NamingDistribution(std::move(flat), n, k);
}

SystemKind classify(const NamingDistribution& naming, double threshold) {
  for (int i = 0; i < naming.num_numbers(); ++i) {
    double best = 0.0;
    for (int w = 0; w < naming.num_words(); ++w) best = std::max(best, naming.at(i, w));
    if (!(best > threshold)) return SystemKind::kApproximate;
  }
  return SystemKind::kExact;
}

NumeralSystem mode_system(const NamingDistribution& naming) {
  NumeralSystem system;
  system.assignment.reserve(static_cast<size_t>(naming.num_numbers()));
  for (int i = 0; i < naming.num_numbers(); ++i) {
    int best = 0;
    for (int w = 1; w < naming.num_words(); ++w) {
      if (naming.at(i, w) > naming.at(i, best)) best = w;
    }
    system.assignment.push_back(best);
  }
  return system;
}

ListenerPosterior listener_posterior(const NamingDistribution& naming, const NeedPrior& prior) {
  if (prior.size() != naming.num_numbers()) {
    throw std::invalid_argument("listener_posterior: prior/naming mismatch");
  }
  const int n = naming.num_numbers();
  const int k = naming.num_words();
  ListenerPosterior post;
  post.marginals = naming.word_marginals(prior);
  post.rows.assign(static_cast<size_t>(k), std::vector<double>(static_cast<size_t>(n), 0.0));
  post.reachable.assign(static_cast<size_t>(k), false);
  for (int w = 0; w < k; ++w) {
    if (post.marginals[w] <= 0.0) continue;
    post.reachable[w] = true;
    for (int i = 0; i < n; ++i) {
      post.rows[w][i] = naming.at(i, w) * prior[i] / post.marginals[w];
    }
  }
  return post;
}

CostReport comm_cost(const NamingDistribution& naming, const NeedPrior& prior,
                     double classify_threshold) {
  const ListenerPosterior post = listener_posterior(naming, prior);
  const int n = naming.num_numbers();
  const int k = naming.num_words();

  double cost = 0.0;
  int terms = 0;
  for (int w = 0; w < k; ++w) {
    if (!post.reachable[w]) continue;
    ++terms;
    for (int i = 0; i < n; ++i) {
      const double joint = naming.at(i, w) * prior[i];
      if (joint > 0.0) cost -= joint * std::log2(post.rows[w][i]);
    }
  }
  if (cost < 0.0) cost = 0.0;  // clamp -0.0 and rounding dust
  return CostReport{cost, terms, classify(naming, classify_threshold)};
}

}  // namespace numsig
