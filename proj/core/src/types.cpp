#include "numsig/types.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>

#include "numsig/csv.hpp"

namespace numsig {

NumberLine::NumberLine(int lo_, int hi_) : lo(lo_), hi(hi_) {
  if (lo != 1) throw std::domain_error("number line must start at 1");
  if (hi < lo) throw std::domain_error("empty number line");
}

int NumberLine::index_of(int n) const {
  if (!contains(n)) {
    throw std::domain_error("number " + std::to_string(n) + " outside [" +
                            std::to_string(lo) + "," + std::to_string(hi) + "]");
  }
  return n - lo;
}

int NumberLine::number_at(int index) const {
  if (index < 0 || index >= size()) throw std::domain_error("number index out of range");
  return lo + index;
}

Vocabulary::Vocabulary(int size_) : size(size_) {
  if (size < 1) throw std::domain_error("vocabulary must have at least one word");
}

std::string to_string(RewardKind kind) {
  switch (kind) {
    case RewardKind::kLinear: return "linear";
    case RewardKind::kInverse: return "inverse";
    case RewardKind::kExponential: return "exp";
  }
  throw std::logic_error("unknown reward kind");
}

RewardKind parse_reward_kind(const std::string& name) {
  if (name == "linear") return RewardKind::kLinear;
  if (name == "inverse") return RewardKind::kInverse;
  if (name == "exp" || name == "exponential") return RewardKind::kExponential;
  throw std::runtime_error("unknown reward kind: '" + name + "'");
}

double reward(RewardKind kind, int n, int n_hat, const NumberLine& line) {
  if (!line.contains(n) || !line.contains(n_hat)) {
    throw std::domain_error("reward arguments outside the number line");
  }
  const int d = std::abs(n - n_hat);
  switch (kind) {
    case RewardKind::kLinear: return 1.0 - static_cast<double>(d) / line.size();
    case RewardKind::kInverse: return 1.0 / (1.0 + d);
    case RewardKind::kExponential: return std::exp(-static_cast<double>(d));
  }
  throw std::logic_error("unknown reward kind");
}

namespace {

void check_distribution(std::span<const double> probs, const char* what) {
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw std::invalid_argument(std::string(what) + ": negative entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbTolerance) {
    throw std::invalid_argument(std::string(what) + ": entries sum to " + std::to_string(sum));
  }
}

}  // namespace

NeedPrior::NeedPrior(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw std::invalid_argument("need prior: empty");
  check_distribution(probs_, "need prior");
}

NeedPrior NeedPrior::normalized(std::vector<double> weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("need prior: negative weight");
    sum += w;
  }
  if (sum <= 0.0) throw std::invalid_argument("need prior: zero total weight");
  for (double& w : weights) w /= sum;
  return NeedPrior(std::move(weights));
}

double NeedPrior::entropy_bits() const { return numsig::entropy_bits(probs_); }

NamingDistribution::NamingDistribution(std::vector<double> flat, int num_numbers, int num_words)
    : flat_(std::move(flat)), num_numbers_(num_numbers), num_words_(num_words) {
  if (num_numbers_ < 1 || num_words_ < 1 ||
      flat_.size() != static_cast<size_t>(num_numbers_) * num_words_) {
    throw std::invalid_argument("naming distribution: bad shape");
  }
  for (int i = 0; i < num_numbers_; ++i) check_distribution(row(i), "naming row");
}

NamingDistribution NamingDistribution::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw std::invalid_argument("naming distribution: no rows");
  const size_t cols = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw std::invalid_argument("naming distribution: ragged rows");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return NamingDistribution(std::move(flat), static_cast<int>(rows.size()),
                            static_cast<int>(cols));
}

std::vector<double> NamingDistribution::word_marginals(const NeedPrior& prior) const {
  if (prior.size() != num_numbers_) {
    throw std::invalid_argument("word_marginals: prior length mismatch");
  }
  std::vector<double> m(static_cast<size_t>(num_words_), 0.0);
  for (int i = 0; i < num_numbers_; ++i) {
    for (int w = 0; w < num_words_; ++w) m[w] += at(i, w) * prior[i];
  }
  return m;
}

int NumeralSystem::term_count() const {
  std::set<int> words(assignment.begin(), assignment.end());
  return static_cast<int>(words.size());
}

NumeralSystem NumeralSystem::canonicalized() const {
  std::map<int, int> relabel;
  NumeralSystem out;
  out.assignment.reserve(assignment.size());
  for (int w : assignment) {
    if (w < 0) throw std::invalid_argument("canonicalized: negative word index");
    const auto [it, inserted] = relabel.try_emplace(w, static_cast<int>(relabel.size()));
    out.assignment.push_back(it->second);
  }
  return out;
}

NamingDistribution one_hot_naming(const NumeralSystem& system, int num_words) {
  const int n = system.size();
  std::vector<double> flat(static_cast<size_t>(n) * num_words, 0.0);
  for (int i = 0; i < n; ++i) {
    const int w = system.assignment[i];
    if (w < 0 || w >= num_words) throw std::invalid_argument("one_hot_naming: bad word index");
    flat[static_cast<size_t>(i) * num_words + w] = 1.0;
  }
  return NamingDistribution(std::move(flat), n, num_words);
}

double entropy_bits(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

void write_naming_csv(const NamingDistribution& naming, const NumberLine& line,
                      std::ostream& out) {
  if (line.size() != naming.num_numbers()) {
    throw std::invalid_argument("write_naming_csv: line/naming size mismatch");
  }
  out << "n";
  for (int w = 0; w < naming.num_words(); ++w) out << ",w" << w;
  out << "\n";
  for (int i = 0; i < naming.num_numbers(); ++i) {
    out << line.number_at(i);
    for (int w = 0; w < naming.num_words(); ++w) out << "," << fmt_g(naming.at(i, w), 17);
    out << "\n";
  }
}

void write_naming_csv(const NamingDistribution& naming, const NumberLine& line,
                      const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  write_naming_csv(naming, line, out);
}

NamingDistribution read_naming_csv(std::istream& in, const NumberLine& line) {
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("naming csv: empty stream");
  const auto cols = split(trim(header), ',');
  if (cols.size() < 2 || cols[0] != "n") throw std::runtime_error("naming csv: bad header");
  const int num_words = static_cast<int>(cols.size()) - 1;

  std::vector<std::vector<double>> rows;
  std::string linebuf;
  while (std::getline(in, linebuf)) {
    std::string t = trim(linebuf);
    if (t.empty()) continue;
    const auto fields = split(t, ',');
    if (static_cast<int>(fields.size()) != num_words + 1) {
      throw std::runtime_error("naming csv: ragged row");
    }
    const int n = parse_int(fields[0], "naming csv");
    if (n != line.number_at(static_cast<int>(rows.size()))) {
      throw std::runtime_error("naming csv: rows out of order");
    }
    std::vector<double> row;
    row.reserve(num_words);
    for (int w = 0; w < num_words; ++w) row.push_back(parse_double(fields[w + 1], "naming csv"));
    rows.push_back(std::move(row));
  }
  if (static_cast<int>(rows.size()) != line.size()) {
    throw std::runtime_error("naming csv: wrong number of rows");
  }
  return NamingDistribution::from_rows(rows);
}

NamingDistribution read_naming_csv(const std::filesystem::path& path, const NumberLine& line) {
  std::ifstream in = open_input(path);
  return read_naming_csv(in, line);
}

}  // namespace numsig
