#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "numsig/analysis.hpp"
#include "numsig/rng.hpp"
#include "numsig/types.hpp"

namespace numsig {

enum class OptMode { kBest, kWorst };

struct FrontierPoint {
  int terms = 0;
  double cost_bits = 0.0;
  OptMode mode = OptMode::kBest;
  SystemKind kind = SystemKind::kExact;
  NumeralSystem system;       // exact systems
  std::vector<double> means;  // approximate systems
};

// Extreme-cost exact system with exactly k terms: random surjective starts,
// greedy single-number reassignments preserving surjectivity, best (or
// worst) local optimum across restarts. `extra_seeds` adds deterministic
// starting systems (used to chain k-1 optima into k runs).
FrontierPoint optimize_exact(int k, const NeedPrior& prior, OptMode mode, int restarts,
                             Rng& rng, std::span<const NumeralSystem> extra_seeds = {});

// Extreme-cost approximate system of k Gaussian words with sd = weber * mu.
// Means live on the grid {1.0, 1.5, ..., hi}; coordinate hill-climb over
// the grid from random starts.
FrontierPoint optimize_approx(int k, const NeedPrior& prior, OptMode mode, int restarts,
                              double weber, Rng& rng);

// Naming induced by Gaussian word means: every word's meaning row is
// normalized over the line, then p(w|n) is normalized across words.
NamingDistribution approx_naming(std::span<const double> means, double weber,
                                 const NumberLine& line);

struct EnvelopeRow {
  int terms = 0;
  double best_cost = 0.0;
  double worst_cost = 0.0;
};

// Per-term-count extremes: min over Best-mode points and max over
// Worst-mode points (falling back to all points when a side is absent).
std::vector<EnvelopeRow> build_envelope(std::span<const FrontierPoint> points);

// Best and Worst points for every k = 1..max_terms. Best runs at k are
// additionally seeded with the k-1 optimum plus a split, which keeps the
// best envelope non-increasing in k.
std::vector<FrontierPoint> frontier_sweep_exact(int max_terms, const NeedPrior& prior,
                                                int restarts, Rng& rng);
std::vector<FrontierPoint> frontier_sweep_approx(int max_terms, const NeedPrior& prior,
                                                 int restarts, double weber, Rng& rng);

// Envelope CSV `terms,best_cost,worst_cost,kind`.
void write_envelope_csv(std::span<const EnvelopeRow> rows, SystemKind kind,
                        const std::filesystem::path& path);
std::vector<EnvelopeRow> read_envelope_csv(const std::filesystem::path& path);

}  // namespace numsig
