#pragma once

#include <filesystem>
#include <stdexcept>
#include <utility>
#include <vector>

#include "numsig/types.hpp"

namespace numsig {

// Raised when a requested fit has no solution (too little data, or moment
// constraints outside the feasible set).
class FitError : public std::runtime_error {
 public:
  explicit FitError(const std::string& what, double max_residual = 0.0)
      : std::runtime_error(what), max_residual(max_residual) {}
  double max_residual;
};

// Raw corpus counts per number.
struct FrequencyTable {
  std::vector<std::pair<int, double>> entries;  // (number, count)

  // Validates: numbers distinct and on the line, counts non-negative,
  // at least two positive counts.
  static FrequencyTable validated(std::vector<std::pair<int, double>> entries,
                                  const NumberLine& line);
  // CSV `n,count` (comments and a header row allowed).
  static FrequencyTable read_csv(const std::filesystem::path& path, const NumberLine& line);
};

// Relative usage frequency per term of one naming system.
struct WordFrequency {
  std::vector<double> probs;

  static WordFrequency normalized(std::vector<double> counts);
  // CSV `term,count`; terms must be 0..K-1 in order.
  static WordFrequency read_csv(const std::filesystem::path& path);
};

NeedPrior uniform_prior(const NumberLine& line);

struct PowerLawFit {
  double alpha = 0.0;
  NeedPrior prior;
};

// Least squares on (log n, log normalized frequency) over positive-count
// entries; the prior is n^-alpha renormalized over the whole line.
PowerLawFit fit_power_law(const FrequencyTable& freqs, const NumberLine& line);

struct CapResult {
  NeedPrior prior;
  double capacity_bits = 0.0;
  bool converged = false;
  int iterations = 0;
  // Mutual information (bits) achieved by the input distribution at the
  // start of each iteration; non-decreasing.
  std::vector<double> mi_trace_bits;
};

// Capacity-achieving prior of the channel p(w|n) via Blahut-Arimoto,
// initialized uniformly, stopped when the capacity bound gap drops below
// tol_bits. Non-convergence is reported via `converged`, not thrown.
CapResult blahut_arimoto_cap(const NamingDistribution& channel, double tol_bits = 1e-12,
                             int max_iter = 10000);

// Entrywise mean of priors, renormalized.
NeedPrior average_caps(const std::vector<NeedPrior>& caps);

struct MaxEntResult {
  NeedPrior prior;
  std::vector<double> lambda;  // dual variables, one per word
  double max_residual = 0.0;   // largest marginal-constraint violation
  int iterations = 0;
};

// Maximum-entropy prior under the word-marginal constraints
// sum_n p(n) p(w|n) = word_freq[w]. Solved in the dual, where
// p(n) ~ exp(sum_w lambda_w p(w|n)), by ascent with step-halving line
// search from lambda = 0. Infeasible targets raise FitError carrying the
// residual.
MaxEntResult maxent_prior(const NamingDistribution& naming, const WordFrequency& word_freq,
                          double tol = 1e-9, int max_iter = 200000);

// Discretized Gaussian p(n) ~ exp(-(n-mu)^2 / (2 sigma^2)) with
// sigma = weber * mu, normalized over the line.
std::vector<double> gaussian_word_row(double mu, double weber, const NumberLine& line);

}  // namespace numsig
