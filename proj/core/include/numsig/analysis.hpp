#pragma once

#include <vector>

#include "numsig/net.hpp"
#include "numsig/rng.hpp"
#include "numsig/types.hpp"

namespace numsig {

enum class SystemKind { kExact, kApproximate };

std::string to_string(SystemKind kind);

// Bayes reconstruction L_w(n) per word. Words with zero marginal under the
// prior are unreachable; their rows are all-zero and flagged.
struct ListenerPosterior {
  std::vector<std::vector<double>> rows;  // one per word, each over numbers
  std::vector<bool> reachable;
  std::vector<double> marginals;  // p(w)

  int num_words() const { return static_cast<int>(rows.size()); }
};

struct CostReport {
  double cost_bits = 0.0;
  int term_count = 0;  // words with positive marginal
  SystemKind kind = SystemKind::kApproximate;
};

// Monte-Carlo estimate of p(w|n): m Thompson-sampled sender decisions per
// number, fresh dropout mask each round, no updates.
NamingDistribution estimate_naming(const AgentNet& sender, int m, Rng& rng);

// Exact iff every row puts more than `threshold` mass on one word.
SystemKind classify(const NamingDistribution& naming, double threshold = 0.90);

// Row-wise mode; ties to the lowest word index.
NumeralSystem mode_system(const NamingDistribution& naming);

ListenerPosterior listener_posterior(const NamingDistribution& naming, const NeedPrior& prior);

// Expected surprisal -sum_{n,w} p(w|n) p(n) log2 L_w(n); zero-probability
// terms contribute zero.
CostReport comm_cost(const NamingDistribution& naming, const NeedPrior& prior,
                     double classify_threshold = 0.90);

}  // namespace numsig
