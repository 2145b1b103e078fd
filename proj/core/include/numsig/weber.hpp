#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "numsig/analysis.hpp"
#include "numsig/types.hpp"

namespace numsig {

// E[n] of one posterior row; the row must sum to one.
double expected_number(std::span<const double> posterior_row, const NumberLine& line);

// The approximate-number-sense row p(n|w) ~ exp(-(|n-mu| / (2 nu mu))^2),
// normalized over the line. `standard_gaussian` switches the exponent to
// the textbook -(n-mu)^2 / (2 (nu mu)^2) for comparison.
std::vector<double> gaussian_model_row(double mu, double nu, const NumberLine& line,
                                       bool standard_gaussian = false);

// The nu search grid {0.05, 0.06, ..., 2.00}.
std::vector<double> weber_grid();

struct WeberFit {
  double nu = 0.0;
  double mse = 0.0;
  std::vector<double> per_word_mu;  // indexed by reachable-word order
};

// Grid fit for one pair: per-word means from the listener posterior, then
// the nu minimizing the MSE between model rows and posterior rows over all
// (reachable word, number) cells. Ties go to the smaller nu.
WeberFit fit_weber_pair(const ListenerPosterior& posterior, const NumberLine& line,
                        bool standard_gaussian = false);

struct WeberReport {
  std::vector<WeberFit> per_pair;   // aligned with the input; skipped pairs hold nu = NaN
  std::vector<int> skipped_pairs;   // no reachable words
  double pooled_nu = 0.0;           // argmin of the mean MSE curve
  double pooled_mse = 0.0;          // mean per-pair MSE at pooled_nu
  std::vector<double> mse_curve;    // mean per-pair MSE per grid point
};

WeberReport fit_weber(std::span<const ListenerPosterior> posteriors, const NumberLine& line,
                      bool standard_gaussian = false);

// Weber CSV `pair_id,reward,nu,mse` (reward column = experiment label).
void write_weber_csv(const WeberReport& report, const std::string& reward_label,
                     const std::filesystem::path& path);

}  // namespace numsig
