#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "numsig/analysis.hpp"
#include "numsig/game.hpp"
#include "numsig/priors.hpp"
#include "numsig/types.hpp"

namespace numsig {

// Where a run's need prior comes from.
struct PriorSpec {
  enum class Source { kUniform, kPowerLaw, kCap, kMaxEnt, kExplicit };

  Source source = Source::kUniform;
  std::filesystem::path file;          // powerlaw: frequency csv; maxent: word-frequency csv
  std::vector<double> explicit_probs;  // kExplicit only

  // `uniform`, `powerlaw:FILE`, `cap`, `maxent:FILE` or `explicit:p1;p2;...`.
  static PriorSpec parse(const std::string& text);
  std::string label() const;  // uniform | powerlaw | cap | maxent | explicit
};

// One term of a human numeral system: an exact number set or a Gaussian.
struct HumanTerm {
  std::vector<int> numbers;  // exact terms
  double gauss_mu = 0.0;     // approximate terms
  bool is_gaussian() const { return numbers.empty(); }
};

struct HumanSystem {
  std::string language;
  SystemKind kind = SystemKind::kExact;
  std::vector<HumanTerm> terms;

  int term_count() const { return static_cast<int>(terms.size()); }

  // Per-number normalization of the per-term meaning rows: exact terms are
  // uniform over their set, Gaussian terms use sd = weber * mu.
  NamingDistribution naming(const NumberLine& line, double weber = 0.31) const;
};

// Line-oriented file `language,kind,term_spec;term_spec;...` where a
// term_spec is `{a,b,c}` or `gauss(MU)`. Exact systems that leave numbers
// uncovered get one implicit residual term. Overlapping exact terms are a
// validation error.
std::vector<HumanSystem> ingest_human_systems(const std::filesystem::path& path,
                                              const NumberLine& line);

struct HumanSystemCost {
  std::string language;
  int terms = 0;
  double cost_bits = 0.0;
  SystemKind kind = SystemKind::kExact;
};

std::vector<HumanSystemCost> human_system_costs(const std::vector<HumanSystem>& systems,
                                                const NeedPrior& prior, const NumberLine& line,
                                                double weber = 0.31);

struct ResolvedPrior {
  NeedPrior prior;
  std::optional<double> power_law_alpha;  // kPowerLaw only
};

// Builds the prior a spec names. CAP priors average the Blahut-Arimoto
// capacity priors of the exact systems in `human_systems_file`; MaxEnt
// priors pair the word-frequency file with the naming of
// `maxent_language` from the same systems file.
ResolvedPrior resolve_prior(const PriorSpec& spec, const NumberLine& line,
                            const std::filesystem::path& human_systems_file = {},
                            const std::string& maxent_language = "Gooniyandi",
                            double weber = 0.31);

struct ExperimentSpec {
  std::string name = "experiment";
  RewardKind reward_kind = RewardKind::kLinear;
  PriorSpec prior;
  int pair_count = 1;
  int updates = 10000;
  int batch_size = 100;
  int hidden = 50;
  double dropout_p = 0.3;
  double lr = 0.001;
  int vocab = 10;
  NumberLine line;
  int estimate_rounds = 1000;  // Monte-Carlo rounds per number
  std::uint64_t master_seed = 0;
  std::filesystem::path out_dir;
  int workers = 0;  // 0 = hardware concurrency
  std::filesystem::path human_systems_file;
  std::string maxent_language = "Gooniyandi";
};

struct PairOutcome {
  int pair_id = 0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
  CostReport cost;
  NumeralSystem mode;
  std::optional<NamingDistribution> naming;
  std::vector<double> trace;
};

struct RunResult {
  std::filesystem::path out_dir;
  NeedPrior prior;
  std::vector<PairOutcome> outcomes;
  int failures = 0;
};

// Trains pair_count independent pairs on a shared-nothing worker pool
// (per-pair seeds from derive_seed), analyzes each, and persists:
// manifest.json, results.csv, term_histogram.csv, failures.csv, and one
// pairs/pair_#####/{naming.csv,trace.csv,manifest.json} per pair. Output
// bytes depend only on the spec, never on the worker count.
RunResult run_experiment(const ExperimentSpec& spec);

// Results CSV row `pair_id,reward,prior,terms,kind,cost_bits`.
struct ResultRow {
  int pair_id = 0;
  std::string reward;
  std::string prior;
  int terms = 0;
  SystemKind kind = SystemKind::kExact;
  double cost_bits = 0.0;
};

std::vector<ResultRow> read_results_csv(const std::filesystem::path& path);

// Persisted run state needed by the downstream subcommands.
struct LoadedRun {
  NumberLine line;
  Vocabulary vocab;
  RewardKind reward_kind = RewardKind::kLinear;
  std::string prior_label;
  NeedPrior prior;
  std::vector<int> pair_ids;
  std::vector<NamingDistribution> namings;  // aligned with pair_ids
};

LoadedRun load_run(const std::filesystem::path& out_dir);

}  // namespace numsig
