#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace numsig {

// Tolerance used everywhere a probability vector must sum to one.
inline constexpr double kProbTolerance = 1e-9;

// The integer interval of communicable numbers. The line always starts at 1.
struct NumberLine {
  int lo = 1;
  int hi = 20;

  NumberLine() = default;
  NumberLine(int lo_, int hi_);

  int size() const { return hi - lo + 1; }
  bool contains(int n) const { return n >= lo && n <= hi; }

  // Position of n on the line; throws std::domain_error when off-line.
  int index_of(int n) const;
  int number_at(int index) const;
};

// Words are opaque indices 0..size-1.
struct Vocabulary {
  int size = 10;

  Vocabulary() = default;
  explicit Vocabulary(int size_);
};

enum class RewardKind { kLinear, kInverse, kExponential };

std::string to_string(RewardKind kind);
RewardKind parse_reward_kind(const std::string& name);

// Shared reward of one game round. Strictly positive, 1 at zero distance,
// strictly decreasing in |n - n_hat|.
double reward(RewardKind kind, int n, int n_hat, const NumberLine& line);

// Need probability p(n) over a number line.
class NeedPrior {
 public:
  // Validates non-negativity and normalization within kProbTolerance.
  explicit NeedPrior(std::vector<double> probs);

  // Scales non-negative weights to sum one, then validates.
  static NeedPrior normalized(std::vector<double> weights);

  int size() const { return static_cast<int>(probs_.size()); }
  double operator[](int i) const { return probs_[static_cast<size_t>(i)]; }
  std::span<const double> probs() const { return probs_; }

  double entropy_bits() const;

 private:
  std::vector<double> probs_;
};

// Row-stochastic matrix p(w|n): one row per number, one column per word.
class NamingDistribution {
 public:
  NamingDistribution(std::vector<double> flat, int num_numbers, int num_words);
  static NamingDistribution from_rows(const std::vector<std::vector<double>>& rows);

  int num_numbers() const { return num_numbers_; }
  int num_words() const { return num_words_; }

  double at(int number_index, int word) const {
    return flat_[static_cast<size_t>(number_index) * num_words_ + word];
  }
  std::span<const double> row(int number_index) const {
    return {flat_.data() + static_cast<size_t>(number_index) * num_words_,
            static_cast<size_t>(num_words_)};
  }

  // Marginal word probability under a prior, p(w) = sum_n p(w|n) p(n).
  std::vector<double> word_marginals(const NeedPrior& prior) const;

 private:
  std::vector<double> flat_;
  int num_numbers_ = 0;
  int num_words_ = 0;
};

// Exact partition of the number line: assignment[i] is the word of the
// (lo+i)-th number.
struct NumeralSystem {
  std::vector<int> assignment;

  int size() const { return static_cast<int>(assignment.size()); }
  int term_count() const;

  // Relabels words so the cluster holding the lowest number becomes word 0,
  // the next previously unseen cluster word 1, and so on.
  NumeralSystem canonicalized() const;

  bool operator==(const NumeralSystem&) const = default;
};

// Deterministic naming of an exact system: one-hot rows.
NamingDistribution one_hot_naming(const NumeralSystem& system, int num_words);

// Shannon entropy in bits; zero entries contribute zero.
double entropy_bits(std::span<const double> probs);

// NamingDistribution CSV, header "n,w0,...,w{K-1}", one row per number.
void write_naming_csv(const NamingDistribution& naming, const NumberLine& line,
                      std::ostream& out);
void write_naming_csv(const NamingDistribution& naming, const NumberLine& line,
                      const std::filesystem::path& path);
NamingDistribution read_naming_csv(std::istream& in, const NumberLine& line);
NamingDistribution read_naming_csv(const std::filesystem::path& path, const NumberLine& line);

}  // namespace numsig
