#include "numsig/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>

#include "numsig/csv.hpp"
#include "numsig/priors.hpp"

namespace numsig {

namespace {

// Minimum strict improvement accepted by the hill climbs.
constexpr double kImprovementDelta = 1e-12;

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

// Cost of a deterministic partition decomposes as
//   C = H(prior) + sum_cells mass * log2(mass),
// so hill climbs only track the cell-mass term.
struct ExactSearchState {
  std::vector<int> assignment;
  std::vector<double> cell_mass;
  std::vector<int> cell_count;
  double mass_term = 0.0;  // sum_cells mass * log2(mass)

  void init(const std::vector<int>& assign, const NeedPrior& prior, int k) {
    assignment = assign;
    cell_mass.assign(static_cast<size_t>(k), 0.0);
    cell_count.assign(static_cast<size_t>(k), 0);
    for (size_t i = 0; i < assignment.size(); ++i) {
      cell_mass[assignment[i]] += prior[static_cast<int>(i)];
      cell_count[assignment[i]] += 1;
    }
    mass_term = 0.0;
    for (double m : cell_mass) mass_term += xlog2x(m);
  }

  double move_delta(int i, int to, const NeedPrior& prior) const {
    const int from = assignment[static_cast<size_t>(i)];
    const double p = prior[i];
    const double ma = cell_mass[from];
    const double mb = cell_mass[to];
    return xlog2x(ma - p) + xlog2x(mb + p) - xlog2x(ma) - xlog2x(mb);
  }

  void apply_move(int i, int to, const NeedPrior& prior, double delta) {
    const int from = assignment[static_cast<size_t>(i)];
    cell_mass[from] -= prior[i];
    cell_mass[to] += prior[i];
    cell_count[from] -= 1;
    cell_count[to] += 1;
    assignment[static_cast<size_t>(i)] = to;
    mass_term += delta;
  }
};

std::vector<int> random_surjective_assignment(int n, int k, Rng& rng) {
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(order[i], order[uniform_int(rng, i + 1)]);
  std::vector<int> assignment(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    assignment[order[j]] = j < k ? j : uniform_int(rng, k);
  }
  return assignment;
}

// Greedy single-number reassignments until no strictly improving move.
void climb_exact(ExactSearchState& state, const NeedPrior& prior, OptMode mode, int k) {
  const int n = static_cast<int>(state.assignment.size());
  bool moved = true;
  while (moved) {
    moved = false;
    for (int i = 0; i < n; ++i) {
      const int from = state.assignment[static_cast<size_t>(i)];
      if (state.cell_count[from] <= 1) continue;  // would break surjectivity
      for (int to = 0; to < k; ++to) {
        if (to == from) continue;
        const double delta = state.move_delta(i, to, prior);
        const bool improves = mode == OptMode::kBest ? delta < -kImprovementDelta
                                                     : delta > kImprovementDelta;
        if (improves) {
          state.apply_move(i, to, prior, delta);
          moved = true;
          break;  // cell of i changed; rescan from its new placement
        }
      }
    }
  }
}

}  // namespace

FrontierPoint optimize_exact(int k, const NeedPrior& prior, OptMode mode, int restarts,
                             Rng& rng, std::span<const NumeralSystem> extra_seeds) {
  const int n = prior.size();
  if (k < 1 || k > n) throw std::invalid_argument("optimize_exact: k out of range");
  if (restarts < 1) throw std::invalid_argument("optimize_exact: restarts must be >= 1");

  ExactSearchState state;
  bool have_best = false;
  double best_mass_term = 0.0;
  std::vector<int> best_assignment;

  auto consider = [&](const std::vector<int>& start) {
    state.init(start, prior, k);
    climb_exact(state, prior, mode, k);
    const bool better = !have_best ||
                        (mode == OptMode::kBest ? state.mass_term < best_mass_term
                                                : state.mass_term > best_mass_term);
    if (better) {
      have_best = true;
      best_mass_term = state.mass_term;
      best_assignment = state.assignment;
    }
  };

  for (const NumeralSystem& seed : extra_seeds) {
    if (seed.size() != n || seed.term_count() != k) {
      throw std::invalid_argument("optimize_exact: seed system has wrong shape");
    }
    consider(seed.canonicalized().assignment);
  }
  for (int r = 0; r < restarts; ++r) consider(random_surjective_assignment(n, k, rng));

  NumeralSystem system{std::move(best_assignment)};
  system = system.canonicalized();
  const double cost = comm_cost(one_hot_naming(system, k), prior).cost_bits;
  return FrontierPoint{k, cost, mode, SystemKind::kExact, std::move(system), {}};
}

NamingDistribution approx_naming(std::span<const double> means, double weber,
                                 const NumberLine& line) {
  const int n = line.size();
  const int k = static_cast<int>(means.size());
  std::vector<std::vector<double>> word_rows;
  word_rows.reserve(static_cast<size_t>(k));
  for (double mu : means) word_rows.push_back(gaussian_word_row(mu, weber, line));

  std::vector<double> flat(static_cast<size_t>(n) * k);
  for (int i = 0; i < n; ++i) {
    double den = 0.0;
    for (int w = 0; w < k; ++w) den += word_rows[w][i];
    for (int w = 0; w < k; ++w) flat[static_cast<size_t>(i) * k + w] = word_rows[w][i] / den;
  }
  return NamingDistribution(std::move(flat), n, k);
}

namespace {

// Expected surprisal of the naming induced by Gaussian rows, computed from
// cached per-grid-value rows.
double approx_cost(const std::vector<int>& mean_idx,
                   const std::vector<std::vector<double>>& row_cache, const NeedPrior& prior) {
  const int n = prior.size();
  const int k = static_cast<int>(mean_idx.size());
  double cost = 0.0;
  std::vector<double> joint(static_cast<size_t>(n) * k);
  std::vector<double> marginal(static_cast<size_t>(k), 0.0);
  for (int i = 0; i < n; ++i) {
    double den = 0.0;
    for (int w = 0; w < k; ++w) den += row_cache[mean_idx[w]][i];
    for (int w = 0; w < k; ++w) {
      const double j = row_cache[mean_idx[w]][i] / den * prior[i];
      joint[static_cast<size_t>(i) * k + w] = j;
      marginal[w] += j;
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int w = 0; w < k; ++w) {
      const double j = joint[static_cast<size_t>(i) * k + w];
      if (j > 0.0) cost -= j * std::log2(j / marginal[w]);
    }
  }
  return std::max(cost, 0.0);
}

}  // namespace

FrontierPoint optimize_approx(int k, const NeedPrior& prior, OptMode mode, int restarts,
                              double weber, Rng& rng) {
  const int n = prior.size();
  if (k < 1 || k > n) throw std::invalid_argument("optimize_approx: k out of range");
  if (restarts < 1) throw std::invalid_argument("optimize_approx: restarts must be >= 1");
  const NumberLine line(1, n);

  // Mean grid {1.0, 1.5, ..., hi}.
  std::vector<double> grid;
  for (int j = 0; j <= 2 * (n - 1); ++j) grid.push_back(1.0 + 0.5 * j);
  std::vector<std::vector<double>> row_cache;
  row_cache.reserve(grid.size());
  for (double mu : grid) row_cache.push_back(gaussian_word_row(mu, weber, line));

  const int g = static_cast<int>(grid.size());
  bool have_best = false;
  double best_cost = 0.0;
  std::vector<int> best_idx;

  std::vector<int> idx(static_cast<size_t>(k));
  for (int r = 0; r < restarts; ++r) {
    for (int w = 0; w < k; ++w) idx[w] = uniform_int(rng, g);
    double cost = approx_cost(idx, row_cache, prior);

    bool moved = true;
    while (moved) {
      moved = false;
      for (int w = 0; w < k; ++w) {
        const int original = idx[w];
        int candidate = original;
        double candidate_cost = cost;
        for (int v = 0; v < g; ++v) {
          if (v == original) continue;
          idx[w] = v;
          const double c = approx_cost(idx, row_cache, prior);
          const bool improves = mode == OptMode::kBest
                                    ? c < candidate_cost - kImprovementDelta
                                    : c > candidate_cost + kImprovementDelta;
          if (improves) {
            candidate = v;
            candidate_cost = c;
          }
        }
        idx[w] = candidate;
        if (candidate != original) {
          cost = candidate_cost;
          moved = true;
        }
      }
    }

    const bool better = !have_best ||
                        (mode == OptMode::kBest ? cost < best_cost : cost > best_cost);
    if (better) {
      have_best = true;
      best_cost = cost;
      best_idx = idx;
    }
  }

  std::vector<double> means;
  means.reserve(best_idx.size());
  for (int v : best_idx) means.push_back(grid[v]);
  std::sort(means.begin(), means.end());
  const double cost = comm_cost(approx_naming(means, weber, line), prior).cost_bits;
  return FrontierPoint{k, cost, mode, SystemKind::kApproximate, {}, std::move(means)};
}

std::vector<EnvelopeRow> build_envelope(std::span<const FrontierPoint> points) {
  if (points.empty()) throw std::invalid_argument("build_envelope: no points");
  std::map<int, EnvelopeRow> rows;
  for (const FrontierPoint& p : points) {
    auto [it, inserted] = rows.try_emplace(p.terms, EnvelopeRow{p.terms, p.cost_bits, p.cost_bits});
    if (inserted) continue;
    it->second.best_cost = std::min(it->second.best_cost, p.cost_bits);
    it->second.worst_cost = std::max(it->second.worst_cost, p.cost_bits);
  }
  // Dedicated Best/Worst points take precedence over the pooled extremes.
  for (auto& [terms, row] : rows) {
    double best = 1e300, worst = -1e300;
    bool saw_best = false, saw_worst = false;
    for (const FrontierPoint& p : points) {
      if (p.terms != terms) continue;
      if (p.mode == OptMode::kBest) {
        best = std::min(best, p.cost_bits);
        saw_best = true;
      } else {
        worst = std::max(worst, p.cost_bits);
        saw_worst = true;
      }
    }
    if (saw_best) row.best_cost = best;
    if (saw_worst) row.worst_cost = worst;
  }
  std::vector<EnvelopeRow> out;
  out.reserve(rows.size());
  for (const auto& [terms, row] : rows) out.push_back(row);
  return out;
}

namespace {

// The k-1 optimum plus a split: detach the heaviest member of the
// heaviest splittable cell into the new word.
NumeralSystem split_system(const NumeralSystem& system, const NeedPrior& prior) {
  const int k = system.term_count();
  int best_cell = -1;
  double best_cell_mass = -1.0;
  std::vector<double> cell_mass(static_cast<size_t>(k), 0.0);
  std::vector<int> cell_count(static_cast<size_t>(k), 0);
  for (int i = 0; i < system.size(); ++i) {
    cell_mass[system.assignment[i]] += prior[i];
    cell_count[system.assignment[i]] += 1;
  }
  for (int c = 0; c < k; ++c) {
    if (cell_count[c] >= 2 && cell_mass[c] > best_cell_mass) {
      best_cell = c;
      best_cell_mass = cell_mass[c];
    }
  }
  NumeralSystem out = system;
  if (best_cell < 0) return out;  // all singletons; nothing to split
  int detach = -1;
  double detach_mass = -1.0;
  for (int i = 0; i < system.size(); ++i) {
    if (system.assignment[i] == best_cell && prior[i] > detach_mass) {
      detach = i;
      detach_mass = prior[i];
    }
  }
  out.assignment[detach] = k;
  return out;
}

}  // namespace

std::vector<FrontierPoint> frontier_sweep_exact(int max_terms, const NeedPrior& prior,
                                                int restarts, Rng& rng) {
  if (max_terms < 1 || max_terms > prior.size()) {
    throw std::invalid_argument("frontier_sweep_exact: max_terms out of range");
  }
  std::vector<FrontierPoint> points;
  NumeralSystem previous_best;
  for (int k = 1; k <= max_terms; ++k) {
    std::vector<NumeralSystem> seeds;
    if (k > 1 && previous_best.term_count() == k - 1) {
      NumeralSystem seed = split_system(previous_best, prior);
      if (seed.term_count() == k) seeds.push_back(std::move(seed));
    }
    FrontierPoint best = optimize_exact(k, prior, OptMode::kBest, restarts, rng, seeds);
    previous_best = best.system;
    points.push_back(std::move(best));
    points.push_back(optimize_exact(k, prior, OptMode::kWorst, restarts, rng));
  }
  return points;
}

std::vector<FrontierPoint> frontier_sweep_approx(int max_terms, const NeedPrior& prior,
                                                 int restarts, double weber, Rng& rng) {
  if (max_terms < 1 || max_terms > prior.size()) {
    throw std::invalid_argument("frontier_sweep_approx: max_terms out of range");
  }
  std::vector<FrontierPoint> points;
  for (int k = 1; k <= max_terms; ++k) {
    points.push_back(optimize_approx(k, prior, OptMode::kBest, restarts, weber, rng));
    points.push_back(optimize_approx(k, prior, OptMode::kWorst, restarts, weber, rng));
  }
  return points;
}

void write_envelope_csv(std::span<const EnvelopeRow> rows, SystemKind kind,
                        const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  out << "terms,best_cost,worst_cost,kind\n";
  const std::string kind_name = to_string(kind);
  for (const EnvelopeRow& row : rows) {
    out << row.terms << ',' << fmt_g(row.best_cost, 12) << ',' << fmt_g(row.worst_cost, 12)
        << ',' << kind_name << '\n';
  }
}

std::vector<EnvelopeRow> read_envelope_csv(const std::filesystem::path& path) {
  std::vector<EnvelopeRow> rows;
  for (const auto& line : read_data_lines(path)) {
    const auto fields = split(line, ',');
    if (fields.size() != 4) throw std::runtime_error("envelope csv: expected 4 columns");
    if (trim(fields[0]) == "terms") continue;
    rows.push_back(EnvelopeRow{parse_int(fields[0], "envelope csv"),
                               parse_double(fields[1], "envelope csv"),
                               parse_double(fields[2], "envelope csv")});
  }
  return rows;
}

}  // namespace numsig
