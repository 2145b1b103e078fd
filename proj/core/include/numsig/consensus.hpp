#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <vector>

#include "numsig/rng.hpp"
#include "numsig/types.hpp"

namespace numsig {

// Signed pairwise agreement counts over accumulated numeral systems:
// entry (i,j) gains 1 whenever a system puts numbers i and j in the same
// word and loses 1 otherwise.
class AgreementMatrix {
 public:
  explicit AgreementMatrix(int n);

  void accumulate(const NumeralSystem& system);

  int size() const { return n_; }
  int systems_count() const { return count_; }
  int at(int i, int j) const { return m_[static_cast<size_t>(i) * n_ + j]; }

 private:
  int n_;
  int count_ = 0;
  std::vector<int> m_;
};

// Within-cluster agreement minus between-cluster agreement, over i < j.
long long agreement_objective(const AgreementMatrix& m, const NumeralSystem& partition);

// Agreement-maximizing partition by local search over random restarts.
// Moves: relocate one number (to any cluster or a new one), merge two
// clusters, split a cluster at its weakest adjacent tie. The result is
// canonicalized (word 0 holds the lowest number).
NumeralSystem correlation_cluster(const AgreementMatrix& m, int restarts, Rng& rng);

// One consensus system per mode-system term count, as `terms -> system`.
std::map<int, NumeralSystem> consensus_by_term_count(const std::vector<NumeralSystem>& systems,
                                                     int restarts, Rng& rng);

// Consensus CSV `terms,n,word`.
void write_consensus_csv(const std::map<int, NumeralSystem>& consensus, const NumberLine& line,
                         const std::filesystem::path& path);
std::map<int, NumeralSystem> read_consensus_csv(const std::filesystem::path& path,
                                                const NumberLine& line);

}  // namespace numsig
