#include "numsig/priors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "numsig/csv.hpp"

namespace numsig {

namespace {
constexpr double kLn2 = 0.6931471805599453;
}

FrequencyTable FrequencyTable::validated(std::vector<std::pair<int, double>> entries,
                                         const NumberLine& line) {
  std::set<int> seen;
  int positive = 0;
  for (const auto& [n, count] : entries) {
    if (!line.contains(n)) throw std::invalid_argument("frequency table: number off the line");
    if (!seen.insert(n).second) throw std::invalid_argument("frequency table: duplicate number");
    if (count < 0.0) throw std::invalid_argument("frequency table: negative count");
    if (count > 0.0) ++positive;
  }
  if (positive < 2) throw FitError("frequency table: needs at least 2 positive counts");
  FrequencyTable t;
  t.entries = std::move(entries);
  return t;
}

FrequencyTable FrequencyTable::read_csv(const std::filesystem::path& path,
                                        const NumberLine& line) {
  std::vector<std::pair<int, double>> entries;
  for (const auto& row : read_data_lines(path)) {
    const auto fields = split(row, ',');
    if (fields.size() != 2) throw std::runtime_error("frequency csv: expected `n,count`");
    if (trim(fields[0]) == "n") continue;  // header
    entries.emplace_back(parse_int(fields[0], "frequency csv"),
                         parse_double(fields[1], "frequency csv"));
  }
  return validated(std::move(entries), line);
}

WordFrequency WordFrequency::normalized(std::vector<double> counts) {
  double sum = 0.0;
  for (double c : counts) {
    if (c < 0.0) throw std::invalid_argument("word frequency: negative count");
    sum += c;
  }
  if (sum <= 0.0) throw std::invalid_argument("word frequency: zero total");
  for (double& c : counts) c /= sum;
  return WordFrequency{std::move(counts)};
}

WordFrequency WordFrequency::read_csv(const std::filesystem::path& path) {
  std::vector<double> counts;
  for (const auto& row : read_data_lines(path)) {
    const auto fields = split(row, ',');
    if (fields.size() != 2) throw std::runtime_error("word frequency csv: expected `term,count`");
    if (trim(fields[0]) == "term") continue;
    const int term = parse_int(fields[0], "word frequency csv");
    if (term != static_cast<int>(counts.size())) {
      throw std::runtime_error("word frequency csv: terms must be 0..K-1 in order");
    }
    counts.push_back(parse_double(fields[1], "word frequency csv"));
  }
  if (counts.empty()) throw std::runtime_error("word frequency csv: no rows");
  return normalized(std::move(counts));
}

NeedPrior uniform_prior(const NumberLine& line) {
  return NeedPrior(std::vector<double>(static_cast<size_t>(line.size()),
                                       1.0 / static_cast<double>(line.size())));
}

PowerLawFit fit_power_law(const FrequencyTable& freqs, const NumberLine& line) {
  double total = 0.0;
  for (const auto& [n, count] : freqs.entries) total += count;

  std::vector<double> xs, ys;
  for (const auto& [n, count] : freqs.entries) {
    if (count <= 0.0) continue;
    xs.push_back(std::log(static_cast<double>(n)));
    ys.push_back(std::log(count / total));
  }
  if (xs.size() < 2) throw FitError("power-law fit: needs at least 2 positive counts");

  const size_t m = xs.size();
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < m; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < m; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0.0) throw FitError("power-law fit: degenerate abscissae");
  const double alpha = -sxy / sxx;

  std::vector<double> weights(static_cast<size_t>(line.size()));
  for (int i = 0; i < line.size(); ++i) {
    weights[i] = std::pow(static_cast<double>(line.number_at(i)), -alpha);
  }
  return PowerLawFit{alpha, NeedPrior::normalized(std::move(weights))};
}

namespace {

// I(r; channel) in nats for input distribution r.
double mutual_information_nats(const NamingDistribution& channel, std::span<const double> r) {
  const int n = channel.num_numbers();
  const int k = channel.num_words();
  std::vector<double> marginal(static_cast<size_t>(k), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int w = 0; w < k; ++w) marginal[w] += r[i] * channel.at(i, w);
  }
  double mi = 0.0;
  for (int i = 0; i < n; ++i) {
    if (r[i] <= 0.0) continue;
    for (int w = 0; w < k; ++w) {
      const double c = channel.at(i, w);
      if (c > 0.0) mi += r[i] * c * std::log(c / marginal[w]);
    }
  }
  return mi;
}

}  // namespace

CapResult blahut_arimoto_cap(const NamingDistribution& channel, double tol_bits, int max_iter) {
  if (tol_bits <= 0.0) throw std::invalid_argument("blahut_arimoto_cap: tol must be positive");
  const int n = channel.num_numbers();
  const int k = channel.num_words();
  const double tol_nats = tol_bits * kLn2;

  std::vector<double> r(static_cast<size_t>(n), 1.0 / n);
  std::vector<double> marginal(static_cast<size_t>(k));
  std::vector<double> d(static_cast<size_t>(n));

  CapResult result{NeedPrior(r), 0.0, false, 0, {}};
  double capacity_nats = 0.0;

  for (int iter = 1; iter <= max_iter; ++iter) {
    result.mi_trace_bits.push_back(mutual_information_nats(channel, r) / kLn2);

    std::fill(marginal.begin(), marginal.end(), 0.0);
    for (int i = 0; i < n; ++i) {
      for (int w = 0; w < k; ++w) marginal[w] += r[i] * channel.at(i, w);
    }
    // d[i] = sum_w p(w|i) ln(p(w|i) / m(w)), the per-input information gain.
    double upper = -1e300;
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int w = 0; w < k; ++w) {
        const double c = channel.at(i, w);
        if (c > 0.0) s += c * std::log(c / marginal[w]);
      }
      d[i] = s;
      upper = std::max(upper, s);
    }
    double z = 0.0;
    for (int i = 0; i < n; ++i) z += r[i] * std::exp(d[i]);
    const double lower = std::log(z);

    for (int i = 0; i < n; ++i) r[i] = r[i] * std::exp(d[i]) / z;

    result.iterations = iter;
    capacity_nats = lower;
    if (upper - lower < tol_nats) {
      result.converged = true;
      break;
    }
  }

  // Guard against drift before the NeedPrior invariant check.
  double sum = 0.0;
  for (double v : r) sum += v;
  for (double& v : r) v /= sum;

  result.prior = NeedPrior(std::move(r));
  result.capacity_bits = capacity_nats / kLn2;
  return result;
}

NeedPrior average_caps(const std::vector<NeedPrior>& caps) {
  if (caps.empty()) throw std::invalid_argument("average_caps: empty list");
  const int n = caps.front().size();
  std::vector<double> mean(static_cast<size_t>(n), 0.0);
  for (const auto& cap : caps) {
    if (cap.size() != n) throw std::invalid_argument("average_caps: length mismatch");
    for (int i = 0; i < n; ++i) mean[i] += cap[i];
  }
  for (double& v : mean) v /= static_cast<double>(caps.size());
  return NeedPrior::normalized(std::move(mean));
}

namespace {

// p_lambda(n) ~ exp(sum_w lambda_w p(w|n)), with the max exponent subtracted.
void exp_family_prior(const NamingDistribution& naming, std::span<const double> lambda,
                      std::vector<double>& out) {
  const int n = naming.num_numbers();
  const int k = naming.num_words();
  out.resize(static_cast<size_t>(n));
  double max_s = -1e300;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int w = 0; w < k; ++w) s += lambda[w] * naming.at(i, w);
    out[i] = s;
    max_s = std::max(max_s, s);
  }
  double z = 0.0;
  for (int i = 0; i < n; ++i) {
    out[i] = std::exp(out[i] - max_s);
    z += out[i];
  }
  for (int i = 0; i < n; ++i) out[i] /= z;
}

// Solves A x = b in place for a small dense symmetric system; Gaussian
// elimination with partial pivoting. Returns false when singular.
bool solve_dense(std::vector<double> a, std::vector<double> b, int k,
                 std::vector<double>& x) {
  for (int col = 0; col < k; ++col) {
    int pivot = col;
    for (int row = col + 1; row < k; ++row) {
      if (std::abs(a[row * k + col]) > std::abs(a[pivot * k + col])) pivot = row;
    }
    if (std::abs(a[pivot * k + col]) < 1e-300) return false;
    if (pivot != col) {
      for (int j = 0; j < k; ++j) std::swap(a[col * k + j], a[pivot * k + j]);
      std::swap(b[col], b[pivot]);
    }
    for (int row = col + 1; row < k; ++row) {
      const double f = a[row * k + col] / a[col * k + col];
      for (int j = col; j < k; ++j) a[row * k + j] -= f * a[col * k + j];
      b[row] -= f * b[col];
    }
  }
  x.assign(static_cast<size_t>(k), 0.0);
  for (int row = k - 1; row >= 0; --row) {
    double s = b[row];
    for (int j = row + 1; j < k; ++j) s -= a[row * k + j] * x[j];
    x[row] = s / a[row * k + row];
  }
  return true;
}

// Dual objective D(lambda) = sum_w lambda_w q_w - ln sum_n exp(s_n).
double dual_value(const NamingDistribution& naming, std::span<const double> lambda,
                  std::span<const double> target) {
  const int n = naming.num_numbers();
  const int k = naming.num_words();
  double max_s = -1e300;
  std::vector<double> s(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    double v = 0.0;
    for (int w = 0; w < k; ++w) v += lambda[w] * naming.at(i, w);
    s[i] = v;
    max_s = std::max(max_s, v);
  }
  double z = 0.0;
  for (int i = 0; i < n; ++i) z += std::exp(s[i] - max_s);
  double lin = 0.0;
  for (int w = 0; w < k; ++w) lin += lambda[w] * target[w];
  return lin - (max_s + std::log(z));
}

}  // namespace

MaxEntResult maxent_prior(const NamingDistribution& naming, const WordFrequency& word_freq,
                          double tol, int max_iter) {
  if (tol <= 0.0) throw std::invalid_argument("maxent_prior: tol must be positive");
  const int n = naming.num_numbers();
  const int k = naming.num_words();
  if (static_cast<int>(word_freq.probs.size()) != k) {
    throw std::invalid_argument("maxent_prior: word frequency length mismatch");
  }
  const std::vector<double>& target = word_freq.probs;

  // A word the naming never uses cannot carry positive frequency.
  for (int w = 0; w < k; ++w) {
    double col = 0.0;
    for (int i = 0; i < n; ++i) col += naming.at(i, w);
    if (col == 0.0 && target[w] > tol) {
      throw FitError("maxent_prior: infeasible word frequency (unreachable word " +
                         std::to_string(w) + ")",
                     target[w]);
    }
  }

  std::vector<double> lambda(static_cast<size_t>(k), 0.0);
  std::vector<double> prior;
  std::vector<double> grad(static_cast<size_t>(k));
  std::vector<double> marginal(static_cast<size_t>(k));
  std::vector<double> direction;
  std::vector<double> trial(static_cast<size_t>(k));

  double value = dual_value(naming, lambda, target);
  double residual = 0.0;
  int iter = 0;

  for (iter = 1; iter <= max_iter; ++iter) {
    exp_family_prior(naming, lambda, prior);
    residual = 0.0;
    for (int w = 0; w < k; ++w) {
      double m = 0.0;
      for (int i = 0; i < n; ++i) m += prior[i] * naming.at(i, w);
      marginal[w] = m;
      grad[w] = target[w] - m;
      residual = std::max(residual, std::abs(grad[w]));
    }
    if (residual < tol) break;

    // Ascent direction: Newton step on the concave dual. The Hessian
    // Cov_p(p(.|n)) is singular along the all-ones direction (rows sum to
    // one), so a small ridge pins it; the gradient is orthogonal to that
    // direction anyway. Fall back to the raw gradient if the solve fails.
    std::vector<double> hess(static_cast<size_t>(k) * k, 0.0);
    for (int i = 0; i < n; ++i) {
      for (int w = 0; w < k; ++w) {
        const double piw = prior[i] * naming.at(i, w);
        for (int u = 0; u < k; ++u) hess[w * k + u] += piw * naming.at(i, u);
      }
    }
    for (int w = 0; w < k; ++w) {
      for (int u = 0; u < k; ++u) hess[w * k + u] -= marginal[w] * marginal[u];
      hess[w * k + w] += 1e-13;
    }
    if (!solve_dense(hess, grad, k, direction)) direction = grad;

    double step = 1.0;
    bool accepted = false;
    std::vector<double> trial_prior;
    while (step > 1e-18) {
      for (int w = 0; w < k; ++w) trial[w] = lambda[w] + step * direction[w];
      const double trial_value = dual_value(naming, trial, target);
      bool take = trial_value > value;
      if (!take && trial_value == value) {
        // Improvement below double resolution; accept on residual progress.
        exp_family_prior(naming, trial, trial_prior);
        double trial_residual = 0.0;
        for (int w = 0; w < k; ++w) {
          double m = 0.0;
          for (int i = 0; i < n; ++i) m += trial_prior[i] * naming.at(i, w);
          trial_residual = std::max(trial_residual, std::abs(target[w] - m));
        }
        take = trial_residual < residual;
      }
      if (take) {
        lambda = trial;
        value = trial_value;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // dual cannot be improved at double precision
  }

  if (residual >= tol) {
    throw FitError("maxent_prior: constraints not satisfiable (max residual " +
                       fmt_g(residual, 6) + ")",
                   residual);
  }

  exp_family_prior(naming, lambda, prior);
  return MaxEntResult{NeedPrior::normalized(std::move(prior)), std::move(lambda), residual, iter};
}

std::vector<double> gaussian_word_row(double mu, double weber, const NumberLine& line) {
  if (mu <= 0.0 || weber <= 0.0) {
    throw std::domain_error("gaussian_word_row: mu and weber must be positive");
  }
  const double sigma = weber * mu;
  std::vector<double> row(static_cast<size_t>(line.size()));
  double sum = 0.0;
  for (int i = 0; i < line.size(); ++i) {
    const double d = static_cast<double>(line.number_at(i)) - mu;
    row[i] = std::exp(-d * d / (2.0 * sigma * sigma));
    sum += row[i];
  }
  for (double& v : row) v /= sum;
  return row;
}

}  // namespace numsig
