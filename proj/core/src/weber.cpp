#include "numsig/weber.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "numsig/csv.hpp"

namespace numsig {

double expected_number(std::span<const double> posterior_row, const NumberLine& line) {
  if (static_cast<int>(posterior_row.size()) != line.size()) {
    throw std::invalid_argument("expected_number: row/line mismatch");
  }
  double sum = 0.0, mean = 0.0;
  for (int i = 0; i < line.size(); ++i) {
    sum += posterior_row[i];
    mean += posterior_row[i] * line.number_at(i);
  }
  if (std::abs(sum - 1.0) > kProbTolerance) {
    throw std::invalid_argument("expected_number: row is not normalized");
  }
  return mean;
}

std::vector<double> gaussian_model_row(double mu, double nu, const NumberLine& line,
                                       bool standard_gaussian) {
  if (mu <= 0.0 || nu <= 0.0) {
    throw std::domain_error("gaussian_model_row: mu and nu must be positive");
  }
  std::vector<double> row(static_cast<size_t>(line.size()));
  double sum = 0.0;
  for (int i = 0; i < line.size(); ++i) {
    const double d = std::abs(static_cast<double>(line.number_at(i)) - mu);
    double e;
    if (standard_gaussian) {
      const double sigma = nu * mu;
      e = -(d * d) / (2.0 * sigma * sigma);
    } else {
      const double z = d / (2.0 * nu * mu);
      e = -z * z;
    }
    row[i] = std::exp(e);
    sum += row[i];
  }
  for (double& v : row) v /= sum;
  return row;
}

std::vector<double> weber_grid() {
  std::vector<double> grid;
  grid.reserve(196);
  for (int i = 5; i <= 200; ++i) grid.push_back(static_cast<double>(i) / 100.0);
  return grid;
}

namespace {

// Mean squared residual over all (reachable word, number) cells at one nu.
double pair_mse(const ListenerPosterior& posterior, std::span<const double> mu,
                double nu, const NumberLine& line, bool standard_gaussian) {
  double sum = 0.0;
  size_t cells = 0;
  size_t mu_index = 0;
  for (int w = 0; w < posterior.num_words(); ++w) {
    if (!posterior.reachable[w]) continue;
    const std::vector<double> model = gaussian_model_row(mu[mu_index++], nu, line,
                                                         standard_gaussian);
    for (int i = 0; i < line.size(); ++i) {
      const double r = model[i] - posterior.rows[w][i];
      sum += r * r;
    }
    cells += static_cast<size_t>(line.size());
  }
  return sum / static_cast<double>(cells);
}

}  // namespace

WeberFit fit_weber_pair(const ListenerPosterior& posterior, const NumberLine& line,
                        bool standard_gaussian) {
  std::vector<double> mu;
  for (int w = 0; w < posterior.num_words(); ++w) {
    if (posterior.reachable[w]) mu.push_back(expected_number(posterior.rows[w], line));
  }
  if (mu.empty()) throw std::invalid_argument("fit_weber_pair: no reachable words");

  const std::vector<double> grid = weber_grid();
  double best_nu = grid.front();
  double best_mse = std::numeric_limits<double>::infinity();
  for (double nu : grid) {
    const double mse = pair_mse(posterior, mu, nu, line, standard_gaussian);
    if (mse < best_mse) {  // strict: ties keep the smaller nu
      best_mse = mse;
      best_nu = nu;
    }
  }
  return WeberFit{best_nu, best_mse, std::move(mu)};
}

WeberReport fit_weber(std::span<const ListenerPosterior> posteriors, const NumberLine& line,
                      bool standard_gaussian) {
  if (posteriors.empty()) throw std::invalid_argument("fit_weber: no pairs");
  const std::vector<double> grid = weber_grid();

  WeberReport report;
  report.per_pair.reserve(posteriors.size());
  report.mse_curve.assign(grid.size(), 0.0);

  std::vector<std::vector<double>> curves;
  for (int p = 0; p < static_cast<int>(posteriors.size()); ++p) {
    const ListenerPosterior& post = posteriors[p];
    std::vector<double> mu;
    for (int w = 0; w < post.num_words(); ++w) {
      if (post.reachable[w]) mu.push_back(expected_number(post.rows[w], line));
    }
    if (mu.empty()) {
      report.skipped_pairs.push_back(p);
      report.per_pair.push_back(WeberFit{std::numeric_limits<double>::quiet_NaN(),
                                         std::numeric_limits<double>::quiet_NaN(),
                                         {}});
      continue;
    }
    std::vector<double> curve(grid.size());
    double best_nu = grid.front();
    double best_mse = std::numeric_limits<double>::infinity();
    for (size_t gi = 0; gi < grid.size(); ++gi) {
      curve[gi] = pair_mse(post, mu, grid[gi], line, standard_gaussian);
      if (curve[gi] < best_mse) {
        best_mse = curve[gi];
        best_nu = grid[gi];
      }
    }
    report.per_pair.push_back(WeberFit{best_nu, best_mse, std::move(mu)});
    curves.push_back(std::move(curve));
  }

  if (curves.empty()) throw std::invalid_argument("fit_weber: every pair was skipped");
  size_t best_gi = 0;
  for (size_t gi = 0; gi < grid.size(); ++gi) {
    double mean = 0.0;
    for (const auto& curve : curves) mean += curve[gi];
    report.mse_curve[gi] = mean / static_cast<double>(curves.size());
    if (report.mse_curve[gi] < report.mse_curve[best_gi]) best_gi = gi;
  }
  report.pooled_nu = grid[best_gi];
  report.pooled_mse = report.mse_curve[best_gi];
  return report;
}

void write_weber_csv(const WeberReport& report, const std::string& reward_label,
                     const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  out << "pair_id,reward,nu,mse\n";
  for (size_t p = 0; p < report.per_pair.size(); ++p) {
    const WeberFit& fit = report.per_pair[p];
    if (std::isnan(fit.nu)) continue;  // skipped pair
    out << p << ',' << reward_label << ',' << fmt_g(fit.nu, 12) << ',' << fmt_g(fit.mse, 12)
        << '\n';
  }
}

}  // namespace numsig
