#include "numsig/consensus.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "numsig/csv.hpp"

namespace numsig {

AgreementMatrix::AgreementMatrix(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("agreement matrix: size must be >= 1");
  m_.assign(static_cast<size_t>(n) * n, 0);
}

void AgreementMatrix::accumulate(const NumeralSystem& system) {
  if (system.size() != n_) throw std::invalid_argument("accumulate: system size mismatch");
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      const bool same = system.assignment[i] == system.assignment[j];
      m_[static_cast<size_t>(i) * n_ + j] += same ? 1 : -1;
    }
  }
  ++count_;
}

long long agreement_objective(const AgreementMatrix& m, const NumeralSystem& partition) {
  if (partition.size() != m.size()) {
    throw std::invalid_argument("agreement_objective: size mismatch");
  }
  long long total = 0;
  for (int i = 0; i < m.size(); ++i) {
    for (int j = i + 1; j < m.size(); ++j) {
      const bool same = partition.assignment[i] == partition.assignment[j];
      total += same ? m.at(i, j) : -m.at(i, j);
    }
  }
  return total;
}

namespace {

struct ClusterState {
  const AgreementMatrix* m;
  std::vector<int> label;                  // number -> cluster id
  std::vector<std::vector<int>> clusters;  // cluster id -> sorted members; empty = free slot
  long long objective = 0;

  void init(const AgreementMatrix& matrix, const std::vector<int>& labels) {
    m = &matrix;
    label = labels;
    const int max_label = *std::max_element(label.begin(), label.end());
    clusters.assign(static_cast<size_t>(max_label) + 1, {});
    for (int i = 0; i < static_cast<int>(label.size()); ++i) {
      clusters[label[i]].push_back(i);
    }
    NumeralSystem partition{label};
    objective = agreement_objective(matrix, partition);
  }

  // Sum of agreement between i and the members of cluster c (minus i itself).
  long long tie(int i, int c) const {
    long long s = 0;
    for (int j : clusters[c]) {
      if (j != i) s += m->at(i, j);
    }
    return s;
  }

  int new_cluster_slot() {
    for (int c = 0; c < static_cast<int>(clusters.size()); ++c) {
      if (clusters[c].empty()) return c;
    }
    clusters.emplace_back();
    return static_cast<int>(clusters.size()) - 1;
  }

  void relocate(int i, int to) {
    auto& from_members = clusters[label[i]];
    from_members.erase(std::find(from_members.begin(), from_members.end(), i));
    auto& to_members = clusters[to];
    to_members.insert(std::upper_bound(to_members.begin(), to_members.end(), i), i);
    label[i] = to;
  }

  // Moving i out of its cluster flips its within ties to between and the
  // target ties the other way.
  bool try_relocations() {
    for (int i = 0; i < static_cast<int>(label.size()); ++i) {
      const int from = label[i];
      const long long loss = 2 * tie(i, from);
      for (int to = 0; to < static_cast<int>(clusters.size()); ++to) {
        if (to == from || clusters[to].empty()) continue;
        const long long delta = 2 * tie(i, to) - loss;
        if (delta > 0) {
          objective += delta;
          relocate(i, to);
          return true;
        }
      }
      if (clusters[from].size() > 1) {  // singleton split-off counts as relocation
        const long long delta = -loss;
        if (delta > 0) {
          objective += delta;
          relocate(i, new_cluster_slot());
          return true;
        }
      }
    }
    return false;
  }

  bool try_merges() {
    for (int a = 0; a < static_cast<int>(clusters.size()); ++a) {
      if (clusters[a].empty()) continue;
      for (int b = a + 1; b < static_cast<int>(clusters.size()); ++b) {
        if (clusters[b].empty()) continue;
        long long cross = 0;
        for (int i : clusters[a]) {
          for (int j : clusters[b]) cross += m->at(i, j);
        }
        if (2 * cross > 0) {
          objective += 2 * cross;
          for (int j : std::vector<int>(clusters[b])) relocate(j, a);
          return true;
        }
      }
    }
    return false;
  }

  // Cut each cluster between the adjacent (sorted) members with the weakest
  // agreement; keep the cut when it raises the objective.
  bool try_splits() {
    for (int c = 0; c < static_cast<int>(clusters.size()); ++c) {
      const auto& members = clusters[c];
      if (members.size() < 2) continue;
      int cut = -1;
      int weakest = 0;
      for (size_t t = 0; t + 1 < members.size(); ++t) {
        const int a = m->at(members[t], members[t + 1]);
        if (cut < 0 || a < weakest) {
          cut = static_cast<int>(t);
          weakest = a;
        }
      }
      long long cross = 0;
      for (size_t t = 0; t < members.size(); ++t) {
        for (size_t u = t + 1; u < members.size(); ++u) {
          if (t <= static_cast<size_t>(cut) && u > static_cast<size_t>(cut)) {
            cross += m->at(members[t], members[u]);
          }
        }
      }
      const long long delta = -2 * cross;
      if (delta > 0) {
        objective += delta;
        const std::vector<int> moved(members.begin() + cut + 1, members.end());
        const int slot = new_cluster_slot();
        for (int j : moved) relocate(j, slot);
        return true;
      }
    }
    return false;
  }
};

}  // namespace

NumeralSystem correlation_cluster(const AgreementMatrix& m, int restarts, Rng& rng) {
  if (restarts < 1) throw std::invalid_argument("correlation_cluster: restarts must be >= 1");
  const int n = m.size();

  NumeralSystem best;
  long long best_objective = 0;
  bool have_best = false;

  ClusterState state;
  std::vector<int> labels(static_cast<size_t>(n));
  for (int r = 0; r < restarts; ++r) {
    const int cluster_count = 1 + uniform_int(rng, n);
    for (int i = 0; i < n; ++i) labels[i] = uniform_int(rng, cluster_count);
    state.init(m, labels);

    while (state.try_relocations() || state.try_merges() || state.try_splits()) {
    }

    if (!have_best || state.objective > best_objective) {
      have_best = true;
      best_objective = state.objective;
      best = NumeralSystem{state.label};
    }
  }
  return best.canonicalized();
}

std::map<int, NumeralSystem> consensus_by_term_count(const std::vector<NumeralSystem>& systems,
                                                     int restarts, Rng& rng) {
  std::map<int, AgreementMatrix> matrices;
  for (const NumeralSystem& s : systems) {
    auto it = matrices.find(s.term_count());
    if (it == matrices.end()) {
      it = matrices.try_emplace(s.term_count(), AgreementMatrix(s.size())).first;
    }
    it->second.accumulate(s);
  }
  std::map<int, NumeralSystem> out;
  for (auto& [terms, matrix] : matrices) {
    out.emplace(terms, correlation_cluster(matrix, restarts, rng));
  }
  return out;
}

void write_consensus_csv(const std::map<int, NumeralSystem>& consensus, const NumberLine& line,
                         const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  out << "terms,n,word\n";
  for (const auto& [terms, system] : consensus) {
    for (int i = 0; i < system.size(); ++i) {
      out << terms << ',' << line.number_at(i) << ',' << system.assignment[i] << '\n';
    }
  }
}

std::map<int, NumeralSystem> read_consensus_csv(const std::filesystem::path& path,
                                                const NumberLine& line) {
  std::map<int, NumeralSystem> out;
  for (const auto& row : read_data_lines(path)) {
    const auto fields = split(row, ',');
    if (fields.size() != 3) throw std::runtime_error("consensus csv: expected 3 columns");
    if (trim(fields[0]) == "terms") continue;
    const int terms = parse_int(fields[0], "consensus csv");
    const int n = parse_int(fields[1], "consensus csv");
    const int word = parse_int(fields[2], "consensus csv");
    auto& system = out[terms];
    if (static_cast<int>(system.assignment.size()) != line.index_of(n)) {
      throw std::runtime_error("consensus csv: rows out of order");
    }
    system.assignment.push_back(word);
  }
  return out;
}

}  // namespace numsig
