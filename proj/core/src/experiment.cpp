#include "numsig/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "numsig/csv.hpp"

namespace numsig {

using nlohmann::json;

PriorSpec PriorSpec::parse(const std::string& text) {
  PriorSpec spec;
  const auto colon = text.find(':');
  const std::string head = colon == std::string::npos ? text : text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "uniform" && rest.empty()) {
    spec.source = Source::kUniform;
  } else if (head == "powerlaw" && !rest.empty()) {
    spec.source = Source::kPowerLaw;
    spec.file = rest;
  } else if (head == "cap" && rest.empty()) {
    spec.source = Source::kCap;
  } else if (head == "maxent" && !rest.empty()) {
    spec.source = Source::kMaxEnt;
    spec.file = rest;
  } else if (head == "explicit" && !rest.empty()) {
    spec.source = Source::kExplicit;
    for (const std::string& field : split(rest, ';')) {
      spec.explicit_probs.push_back(parse_double(field, "prior spec"));
    }
  } else {
    throw std::runtime_error(
        "bad prior spec '" + text +
        "' (expected uniform, powerlaw:FILE, cap, maxent:FILE or explicit:p1;p2;...)");
  }
  return spec;
}

std::string PriorSpec::label() const {
  switch (source) {
    case Source::kUniform: return "uniform";
    case Source::kPowerLaw: return "powerlaw";
    case Source::kCap: return "cap";
    case Source::kMaxEnt: return "maxent";
    case Source::kExplicit: return "explicit";
  }
  throw std::logic_error("unknown prior source");
}

NamingDistribution HumanSystem::naming(const NumberLine& line, double weber) const {
  const int n = line.size();
  const int k = term_count();
  std::vector<std::vector<double>> meaning;  // one row per term, over numbers
  meaning.reserve(static_cast<size_t>(k));
  for (const HumanTerm& term : terms) {
    if (term.is_gaussian()) {
      meaning.push_back(gaussian_word_row(term.gauss_mu, weber, line));
    } else {
      std::vector<double> row(static_cast<size_t>(n), 0.0);
      for (int number : term.numbers) row[line.index_of(number)] = 1.0 / term.numbers.size();
      meaning.push_back(std::move(row));
    }
  }
  std::vector<double> flat(static_cast<size_t>(n) * k);
  for (int i = 0; i < n; ++i) {
    double den = 0.0;
    for (int w = 0; w < k; ++w) den += meaning[w][i];
    if (den <= 0.0) {
      throw std::runtime_error("human system '" + language + "': number " +
                               std::to_string(line.number_at(i)) + " has no term");
    }
    for (int w = 0; w < k; ++w) flat[static_cast<size_t>(i) * k + w] = meaning[w][i] / den;
  }
  return NamingDistribution(std::move(flat), n, k);
}

namespace {

HumanTerm parse_term_spec(const std::string& raw, const std::string& language) {
  const std::string spec = trim(raw);
  HumanTerm term;
  if (spec.starts_with("gauss(") && spec.ends_with(")")) {
    term.gauss_mu = parse_double(spec.substr(6, spec.size() - 7), "human system " + language);
    if (term.gauss_mu <= 0.0) {
      throw std::runtime_error("human system '" + language + "': non-positive gaussian mean");
    }
    return term;
  }
  if (spec.starts_with("{") && spec.ends_with("}")) {
    for (const std::string& field : split(spec.substr(1, spec.size() - 2), ',')) {
      term.numbers.push_back(parse_int(trim(field), "human system " + language));
    }
    if (term.numbers.empty()) {
      throw std::runtime_error("human system '" + language + "': empty exact term");
    }
    return term;
  }
  throw std::runtime_error("human system '" + language + "': bad term spec '" + spec + "'");
}

}  // namespace

std::vector<HumanSystem> ingest_human_systems(const std::filesystem::path& path,
                                              const NumberLine& line) {
  std::vector<HumanSystem> systems;
  for (const std::string& row : read_data_lines(path)) {
    // Only the first two commas separate fields; exact sets contain commas.
    const auto first = row.find(',');
    const auto second = first == std::string::npos ? std::string::npos
                                                   : row.find(',', first + 1);
    if (second == std::string::npos) {
      throw std::runtime_error("human systems file: expected `language,kind,specs`: " + row);
    }
    HumanSystem system;
    system.language = trim(row.substr(0, first));
    const std::string kind = trim(row.substr(first + 1, second - first - 1));
    if (kind == "exact") {
      system.kind = SystemKind::kExact;
    } else if (kind == "approximate") {
      system.kind = SystemKind::kApproximate;
    } else {
      throw std::runtime_error("human system '" + system.language + "': bad kind '" + kind + "'");
    }
    for (const std::string& spec : split(row.substr(second + 1), ';')) {
      system.terms.push_back(parse_term_spec(spec, system.language));
    }

    std::set<int> covered;
    bool has_gaussian = false;
    for (const HumanTerm& term : system.terms) {
      if (term.is_gaussian()) {
        has_gaussian = true;
        continue;
      }
      for (int number : term.numbers) {
        if (!line.contains(number)) {
          throw std::runtime_error("human system '" + system.language + "': number " +
                                   std::to_string(number) + " off the line");
        }
        if (!covered.insert(number).second) {
          throw std::runtime_error("human system '" + system.language +
                                   "': overlapping exact terms at " + std::to_string(number));
        }
      }
    }
    // Residual assignment: a purely exact system must cover the whole line,
    // so the uncovered numbers become one extra term ("more than m").
    if (!has_gaussian && static_cast<int>(covered.size()) < line.size()) {
      HumanTerm residual;
      for (int i = 0; i < line.size(); ++i) {
        if (!covered.contains(line.number_at(i))) residual.numbers.push_back(line.number_at(i));
      }
      system.terms.push_back(std::move(residual));
    }
    systems.push_back(std::move(system));
  }
  return systems;
}

std::vector<HumanSystemCost> human_system_costs(const std::vector<HumanSystem>& systems,
                                                const NeedPrior& prior, const NumberLine& line,
                                                double weber) {
  std::vector<HumanSystemCost> costs;
  costs.reserve(systems.size());
  for (const HumanSystem& system : systems) {
    const CostReport report = comm_cost(system.naming(line, weber), prior);
    costs.push_back(HumanSystemCost{system.language, report.term_count, report.cost_bits,
                                    system.kind});
  }
  return costs;
}

ResolvedPrior resolve_prior(const PriorSpec& spec, const NumberLine& line,
                            const std::filesystem::path& human_systems_file,
                            const std::string& maxent_language, double weber) {
  switch (spec.source) {
    case PriorSpec::Source::kUniform:
      return ResolvedPrior{uniform_prior(line), {}};
    case PriorSpec::Source::kExplicit:
      return ResolvedPrior{NeedPrior(spec.explicit_probs), {}};
    case PriorSpec::Source::kPowerLaw: {
      const PowerLawFit fit = fit_power_law(FrequencyTable::read_csv(spec.file, line), line);
      return ResolvedPrior{fit.prior, fit.alpha};
    }
    case PriorSpec::Source::kCap: {
      if (human_systems_file.empty()) {
        throw std::runtime_error("cap prior requires a human systems file");
      }
      std::vector<NeedPrior> caps;
      for (const HumanSystem& system : ingest_human_systems(human_systems_file, line)) {
        if (system.kind != SystemKind::kExact) continue;
        caps.push_back(blahut_arimoto_cap(system.naming(line, weber)).prior);
      }
      if (caps.empty()) throw std::runtime_error("cap prior: no exact human systems found");
      return ResolvedPrior{average_caps(caps), {}};
    }
    case PriorSpec::Source::kMaxEnt: {
      if (human_systems_file.empty()) {
        throw std::runtime_error("maxent prior requires a human systems file");
      }
      const auto systems = ingest_human_systems(human_systems_file, line);
      const auto it = std::find_if(systems.begin(), systems.end(), [&](const HumanSystem& s) {
        return s.language == maxent_language;
      });
      if (it == systems.end()) {
        throw std::runtime_error("maxent prior: language '" + maxent_language +
                                 "' not in the systems file");
      }
      const WordFrequency freq = WordFrequency::read_csv(spec.file);
      return ResolvedPrior{maxent_prior(it->naming(line, weber), freq, 1e-9).prior, {}};
    }
  }
  throw std::logic_error("unknown prior source");
}

namespace {

std::string pair_dir_name(int pair_id) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "pair_%05d", pair_id);
  return buf;
}

PairOutcome run_one_pair(const ExperimentSpec& spec, const NeedPrior& prior, int pair_id) {
  PairOutcome outcome;
  outcome.pair_id = pair_id;
  outcome.seed = derive_seed(spec.master_seed, static_cast<std::uint64_t>(pair_id));
  try {
    GameConfig config(spec.reward_kind, prior, outcome.seed, spec.line,
                      Vocabulary(spec.vocab));
    config.updates = spec.updates;
    config.batch_size = spec.batch_size;
    config.hidden = spec.hidden;
    config.dropout_p = spec.dropout_p;
    config.lr = spec.lr;
    config.validate();

    TrainedPair pair = train_pair(config);
    Rng eval_rng(derive_seed(outcome.seed, 1));
    NamingDistribution naming = estimate_naming(pair.sender, spec.estimate_rounds, eval_rng);
    outcome.cost = comm_cost(naming, prior);
    outcome.mode = mode_system(naming);
    outcome.naming = std::move(naming);
    outcome.trace = std::move(pair.reward_trace);
  } catch (const std::exception& e) {
    outcome.failed = true;
    outcome.error = e.what();
  }
  return outcome;
}

json prior_spec_json(const PriorSpec& spec) {
  json j;
  j["label"] = spec.label();
  if (!spec.file.empty()) j["file"] = spec.file.string();
  return j;
}

}  // namespace

RunResult run_experiment(const ExperimentSpec& spec) {
  if (spec.pair_count < 1) throw std::invalid_argument("run_experiment: pair_count must be >= 1");
  if (spec.out_dir.empty()) throw std::invalid_argument("run_experiment: missing output dir");

  const ResolvedPrior resolved = resolve_prior(spec.prior, spec.line, spec.human_systems_file,
                                               spec.maxent_language);
  const NeedPrior& prior = resolved.prior;

  std::vector<PairOutcome> outcomes(static_cast<size_t>(spec.pair_count));
  int workers = spec.workers > 0 ? spec.workers
                                 : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, spec.pair_count);

  std::atomic<int> next{0};
  auto worker_loop = [&] {
    while (true) {
      const int id = next.fetch_add(1);
      if (id >= spec.pair_count) return;
      outcomes[static_cast<size_t>(id)] = run_one_pair(spec, prior, id);
    }
  };
  if (workers == 1) {
    worker_loop();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker_loop);
    for (std::thread& t : pool) t.join();
  }

  // Persistence is a single-threaded fold in pair order.
  std::filesystem::create_directories(spec.out_dir);

  json manifest;
  manifest["name"] = spec.name;
  manifest["reward"] = to_string(spec.reward_kind);
  manifest["prior"] = prior_spec_json(spec.prior);
  manifest["prior"]["probs"] = std::vector<double>(prior.probs().begin(), prior.probs().end());
  if (resolved.power_law_alpha) manifest["prior"]["alpha"] = *resolved.power_law_alpha;
  manifest["pair_count"] = spec.pair_count;
  manifest["updates"] = spec.updates;
  manifest["batch_size"] = spec.batch_size;
  manifest["hidden"] = spec.hidden;
  manifest["dropout_p"] = spec.dropout_p;
  manifest["lr"] = spec.lr;
  manifest["vocab"] = spec.vocab;
  manifest["line"] = {{"lo", spec.line.lo}, {"hi", spec.line.hi}};
  manifest["estimate_rounds"] = spec.estimate_rounds;
  manifest["master_seed"] = spec.master_seed;

  int failures = 0;
  const std::string reward_label = to_string(spec.reward_kind);
  const std::string prior_label = spec.prior.label();

  std::ofstream results = open_output(spec.out_dir / "results.csv");
  results << "pair_id,reward,prior,terms,kind,cost_bits\n";
  std::ofstream failures_csv = open_output(spec.out_dir / "failures.csv");
  failures_csv << "pair_id,error\n";
  std::map<int, int> histogram;

  for (const PairOutcome& outcome : outcomes) {
    if (outcome.failed) {
      ++failures;
      failures_csv << outcome.pair_id << ',' << outcome.error << '\n';
      continue;
    }
    results << outcome.pair_id << ',' << reward_label << ',' << prior_label << ','
            << outcome.cost.term_count << ',' << to_string(outcome.cost.kind) << ','
            << fmt_g(outcome.cost.cost_bits, 12) << '\n';
    histogram[outcome.cost.term_count] += 1;

    const std::filesystem::path pair_dir = spec.out_dir / "pairs" / pair_dir_name(outcome.pair_id);
    write_naming_csv(*outcome.naming, spec.line, pair_dir / "naming.csv");
    write_trace_csv(outcome.trace, pair_dir / "trace.csv");

    json pair_manifest;
    pair_manifest["pair_id"] = outcome.pair_id;
    pair_manifest["seed"] = outcome.seed;
    pair_manifest["terms"] = outcome.cost.term_count;
    pair_manifest["kind"] = to_string(outcome.cost.kind);
    pair_manifest["cost_bits"] = outcome.cost.cost_bits;
    std::ofstream pm = open_output(pair_dir / "manifest.json");
    pm << pair_manifest.dump(2) << '\n';
  }

  manifest["failures"] = failures;
  std::ofstream mf = open_output(spec.out_dir / "manifest.json");
  mf << manifest.dump(2) << '\n';

  const int succeeded = spec.pair_count - failures;
  std::ofstream hist = open_output(spec.out_dir / "term_histogram.csv");
  hist << "terms,count,frequency\n";
  for (const auto& [terms, count] : histogram) {
    hist << terms << ',' << count << ','
         << fmt_g(static_cast<double>(count) / std::max(succeeded, 1), 12) << '\n';
  }

  return RunResult{spec.out_dir, prior, std::move(outcomes), failures};
}

std::vector<ResultRow> read_results_csv(const std::filesystem::path& path) {
  std::vector<ResultRow> rows;
  for (const std::string& row : read_data_lines(path)) {
    const auto fields = split(row, ',');
    if (fields.size() != 6) throw std::runtime_error("results csv: expected 6 columns");
    if (trim(fields[0]) == "pair_id") continue;
    ResultRow r;
    r.pair_id = parse_int(fields[0], "results csv");
    r.reward = trim(fields[1]);
    r.prior = trim(fields[2]);
    r.terms = parse_int(fields[3], "results csv");
    r.kind = trim(fields[4]) == "exact" ? SystemKind::kExact : SystemKind::kApproximate;
    r.cost_bits = parse_double(fields[5], "results csv");
    rows.push_back(std::move(r));
  }
  return rows;
}

LoadedRun load_run(const std::filesystem::path& out_dir) {
  std::ifstream mf = open_input(out_dir / "manifest.json");
  json manifest = json::parse(mf);

  LoadedRun run{
      NumberLine(manifest["line"]["lo"].get<int>(), manifest["line"]["hi"].get<int>()),
      Vocabulary(manifest["vocab"].get<int>()),
      parse_reward_kind(manifest["reward"].get<std::string>()),
      manifest["prior"]["label"].get<std::string>(),
      NeedPrior(manifest["prior"]["probs"].get<std::vector<double>>()),
      {},
      {}};

  for (const ResultRow& row : read_results_csv(out_dir / "results.csv")) {
    const std::filesystem::path naming_path =
        out_dir / "pairs" / pair_dir_name(row.pair_id) / "naming.csv";
    run.pair_ids.push_back(row.pair_id);
    run.namings.push_back(read_naming_csv(naming_path, run.line));
  }
  return run;
}

}  // namespace numsig
