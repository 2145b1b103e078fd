// numsig command line: train signaling-game pairs, build frontiers and
// priors, analyze runs, and render figures. Every subcommand is
// deterministic given its flags and seed.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "numsig/analysis.hpp"
#include "numsig/consensus.hpp"
#include "numsig/csv.hpp"
#include "numsig/experiment.hpp"
#include "numsig/frontier.hpp"
#include "numsig/plots.hpp"
#include "numsig/priors.hpp"
#include "numsig/weber.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TrainOptions {
  numsig::ExperimentSpec spec;
  std::string reward = "linear";
  std::string prior = "uniform";
  int line_hi = 20;
};

void load_config_file(const fs::path& path, TrainOptions& opt) {
  std::ifstream in = numsig::open_input(path);
  const json cfg = json::parse(in);
  auto get = [&cfg](const char* key, auto& target) {
    if (cfg.contains(key)) target = cfg[key].get<std::decay_t<decltype(target)>>();
  };
  get("name", opt.spec.name);
  get("reward", opt.reward);
  get("prior", opt.prior);
  get("pairs", opt.spec.pair_count);
  get("updates", opt.spec.updates);
  get("batch", opt.spec.batch_size);
  get("hidden", opt.spec.hidden);
  get("dropout", opt.spec.dropout_p);
  get("lr", opt.spec.lr);
  get("vocab", opt.spec.vocab);
  get("line_hi", opt.line_hi);
  get("estimate_rounds", opt.spec.estimate_rounds);
  get("seed", opt.spec.master_seed);
  get("workers", opt.spec.workers);
  get("maxent_language", opt.spec.maxent_language);
  std::string s;
  if (cfg.contains("out")) opt.spec.out_dir = cfg["out"].get<std::string>();
  if (cfg.contains("human_systems")) {
    opt.spec.human_systems_file = cfg["human_systems"].get<std::string>();
  }
}

// Registers the flags shared by `train` and `all`.
void add_train_options(CLI::App* cmd, TrainOptions& opt) {
  cmd->add_option("--name", opt.spec.name, "Experiment name");
  cmd->add_option("--reward", opt.reward, "Reward function: linear, inverse or exp")
      ->check(CLI::IsMember({"linear", "inverse", "exp", "exponential"}));
  cmd->add_option("--prior", opt.prior,
                  "Need prior: uniform, powerlaw:FILE, cap, maxent:FILE or explicit:p1;p2;...");
  cmd->add_option("--pairs", opt.spec.pair_count, "Number of sender-listener pairs");
  cmd->add_option("--updates", opt.spec.updates, "Training updates per pair");
  cmd->add_option("--batch", opt.spec.batch_size, "Game rounds per update");
  cmd->add_option("--hidden", opt.spec.hidden, "Hidden layer width");
  cmd->add_option("--dropout", opt.spec.dropout_p, "Dropout probability");
  cmd->add_option("--lr", opt.spec.lr, "Adam learning rate");
  cmd->add_option("--vocab", opt.spec.vocab, "Vocabulary size");
  cmd->add_option("--line-hi", opt.line_hi, "Top of the number line");
  cmd->add_option("--estimate-rounds", opt.spec.estimate_rounds,
                  "Monte-Carlo rounds per number when estimating p(w|n)");
  cmd->add_option("--seed", opt.spec.master_seed, "Master seed");
  cmd->add_option("--out", opt.spec.out_dir, "Output directory")->required();
  cmd->add_option("--workers", opt.spec.workers, "Worker threads (0 = hardware)");
  cmd->add_option("--human-systems", opt.spec.human_systems_file,
                  "Human systems file (needed by cap/maxent priors)");
  cmd->add_option("--maxent-language", opt.spec.maxent_language,
                  "Language whose naming backs the maxent prior");
}

numsig::ExperimentSpec finalize_spec(TrainOptions& opt) {
  opt.spec.reward_kind = numsig::parse_reward_kind(opt.reward);
  opt.spec.prior = numsig::PriorSpec::parse(opt.prior);
  opt.spec.line = numsig::NumberLine(1, opt.line_hi);
  return opt.spec;
}

int run_train(const numsig::ExperimentSpec& spec) {
  const numsig::RunResult result = numsig::run_experiment(spec);
  double mean_cost = 0.0, mean_terms = 0.0;
  int ok = 0;
  for (const auto& outcome : result.outcomes) {
    if (outcome.failed) continue;
    mean_cost += outcome.cost.cost_bits;
    mean_terms += outcome.cost.term_count;
    ++ok;
  }
  if (ok > 0) {
    mean_cost /= ok;
    mean_terms /= ok;
  }
  std::printf("trained %d pairs (%d failed) -> %s\n", spec.pair_count, result.failures,
              result.out_dir.string().c_str());
  std::printf("mean cost %.4f bits, mean terms %.2f\n", mean_cost, mean_terms);
  return result.failures == spec.pair_count ? 1 : 0;
}

struct FrontierOptions {
  std::string prior = "uniform";
  fs::path human_systems;
  std::string maxent_language = "Gooniyandi";
  fs::path out;
  std::string kind = "both";
  int terms_max = 10;
  int restarts = 1000;
  double weber = 0.31;
  int line_hi = 20;
  std::uint64_t seed = 0;
};

int run_frontier(const FrontierOptions& opt) {
  const numsig::NumberLine line(1, opt.line_hi);
  const numsig::NeedPrior prior =
      numsig::resolve_prior(numsig::PriorSpec::parse(opt.prior), line, opt.human_systems,
                            opt.maxent_language, opt.weber)
          .prior;
  numsig::Rng rng(opt.seed);
  if (opt.kind == "exact" || opt.kind == "both") {
    const auto points = numsig::frontier_sweep_exact(opt.terms_max, prior, opt.restarts, rng);
    const auto envelope = numsig::build_envelope(points);
    numsig::write_envelope_csv(envelope, numsig::SystemKind::kExact,
                               opt.out / "envelope_exact.csv");
    std::printf("exact envelope -> %s\n", (opt.out / "envelope_exact.csv").string().c_str());
  }
  if (opt.kind == "approx" || opt.kind == "both") {
    const auto points =
        numsig::frontier_sweep_approx(opt.terms_max, prior, opt.restarts, opt.weber, rng);
    const auto envelope = numsig::build_envelope(points);
    numsig::write_envelope_csv(envelope, numsig::SystemKind::kApproximate,
                               opt.out / "envelope_approx.csv");
    std::printf("approx envelope -> %s\n", (opt.out / "envelope_approx.csv").string().c_str());
  }
  return 0;
}

void write_prior_csv(const numsig::NeedPrior& prior, const numsig::NumberLine& line,
                     const fs::path& path) {
  std::ofstream out = numsig::open_output(path);
  out << "n,p\n";
  for (int i = 0; i < prior.size(); ++i) {
    out << line.number_at(i) << ',' << numsig::fmt_g(prior[i], 17) << '\n';
  }
}

struct PriorsOptions {
  fs::path freqs;
  fs::path human_systems;
  fs::path word_freqs;
  std::string maxent_language = "Gooniyandi";
  fs::path out;
  int line_hi = 20;
  double weber = 0.31;
};

int run_priors(const PriorsOptions& opt) {
  const numsig::NumberLine line(1, opt.line_hi);
  json meta;

  write_prior_csv(numsig::uniform_prior(line), line, opt.out / "prior_uniform.csv");
  if (!opt.freqs.empty()) {
    const auto fit = numsig::fit_power_law(numsig::FrequencyTable::read_csv(opt.freqs, line),
                                           line);
    write_prior_csv(fit.prior, line, opt.out / "prior_powerlaw.csv");
    meta["powerlaw_alpha"] = fit.alpha;
  }
  if (!opt.human_systems.empty()) {
    std::vector<numsig::NeedPrior> caps;
    json capacities = json::object();
    for (const auto& system : numsig::ingest_human_systems(opt.human_systems, line)) {
      if (system.kind != numsig::SystemKind::kExact) continue;
      const auto cap = numsig::blahut_arimoto_cap(system.naming(line, opt.weber));
      capacities[system.language] = cap.capacity_bits;
      caps.push_back(cap.prior);
    }
    if (!caps.empty()) {
      write_prior_csv(numsig::average_caps(caps), line, opt.out / "prior_cap.csv");
      meta["cap_capacities_bits"] = capacities;
    }
    if (!opt.word_freqs.empty()) {
      const auto systems = numsig::ingest_human_systems(opt.human_systems, line);
      for (const auto& system : systems) {
        if (system.language != opt.maxent_language) continue;
        const auto result = numsig::maxent_prior(system.naming(line, opt.weber),
                                                 numsig::WordFrequency::read_csv(opt.word_freqs),
                                                 1e-9);
        write_prior_csv(result.prior, line, opt.out / "prior_maxent.csv");
        meta["maxent_residual"] = result.max_residual;
        meta["maxent_language"] = system.language;
      }
    }
  }

  std::ofstream mf = numsig::open_output(opt.out / "priors_meta.json");
  mf << meta.dump(2) << '\n';
  std::printf("priors -> %s\n", opt.out.string().c_str());
  return 0;
}

struct InDirOptions {
  fs::path in;
  std::string prior;  // analyze only: override
  fs::path human_systems;
  std::string maxent_language = "Gooniyandi";
  int restarts = 50;
  std::uint64_t seed = 0;
  bool standard_gaussian = false;
};

int run_analyze(const InDirOptions& opt) {
  numsig::LoadedRun run = numsig::load_run(opt.in);
  numsig::NeedPrior prior = run.prior;
  std::string prior_label = run.prior_label;
  if (!opt.prior.empty()) {
    const auto spec = numsig::PriorSpec::parse(opt.prior);
    prior = numsig::resolve_prior(spec, run.line, opt.human_systems, opt.maxent_language)
                .prior;
    prior_label = spec.label();

    std::ifstream mf_in = numsig::open_input(opt.in / "manifest.json");
    json manifest = json::parse(mf_in);
    mf_in.close();
    manifest["analysis_prior"] = {
        {"label", prior_label},
        {"probs", std::vector<double>(prior.probs().begin(), prior.probs().end())}};
    std::ofstream mf_out = numsig::open_output(opt.in / "manifest.json");
    mf_out << manifest.dump(2) << '\n';
  }

  std::ofstream results = numsig::open_output(opt.in / "results.csv");
  results << "pair_id,reward,prior,terms,kind,cost_bits\n";
  std::map<int, int> histogram;
  int ok = 0;
  for (size_t i = 0; i < run.namings.size(); ++i) {
    const auto report = numsig::comm_cost(run.namings[i], prior);
    results << run.pair_ids[i] << ',' << numsig::to_string(run.reward_kind) << ','
            << prior_label << ',' << report.term_count << ','
            << numsig::to_string(report.kind) << ',' << numsig::fmt_g(report.cost_bits, 12)
            << '\n';
    histogram[report.term_count] += 1;
    ++ok;
  }
  std::ofstream hist = numsig::open_output(opt.in / "term_histogram.csv");
  hist << "terms,count,frequency\n";
  for (const auto& [terms, count] : histogram) {
    hist << terms << ',' << count << ','
         << numsig::fmt_g(static_cast<double>(count) / std::max(ok, 1), 12) << '\n';
  }
  std::printf("analyzed %d pairs under %s prior -> %s\n", ok, prior_label.c_str(),
              (opt.in / "results.csv").string().c_str());
  return 0;
}

int run_consensus(const InDirOptions& opt) {
  const numsig::LoadedRun run = numsig::load_run(opt.in);
  std::vector<numsig::NumeralSystem> systems;
  systems.reserve(run.namings.size());
  for (const auto& naming : run.namings) systems.push_back(numsig::mode_system(naming));
  numsig::Rng rng(opt.seed);
  const auto consensus = numsig::consensus_by_term_count(systems, opt.restarts, rng);
  numsig::write_consensus_csv(consensus, run.line, opt.in / "consensus.csv");
  std::printf("consensus over %zu systems (%zu term counts) -> %s\n", systems.size(),
              consensus.size(), (opt.in / "consensus.csv").string().c_str());
  return 0;
}

int run_weber(const InDirOptions& opt) {
  const numsig::LoadedRun run = numsig::load_run(opt.in);
  std::vector<numsig::ListenerPosterior> posteriors;
  posteriors.reserve(run.namings.size());
  for (const auto& naming : run.namings) {
    posteriors.push_back(numsig::listener_posterior(naming, run.prior));
  }
  const auto report = numsig::fit_weber(posteriors, run.line, opt.standard_gaussian);
  numsig::write_weber_csv(report, numsig::to_string(run.reward_kind),
                          opt.in / "weber.csv");

  json meta;
  meta["pooled_nu"] = report.pooled_nu;
  meta["pooled_mse"] = report.pooled_mse;
  meta["pairs_used"] = posteriors.size() - report.skipped_pairs.size();
  meta["pairs_skipped"] = report.skipped_pairs.size();
  std::ofstream mf = numsig::open_output(opt.in / "weber_meta.json");
  mf << meta.dump(2) << '\n';
  for (int p : report.skipped_pairs) {
    std::fprintf(stderr, "warning: pair %d has no reachable words; skipped\n",
                 run.pair_ids[static_cast<size_t>(p)]);
  }
  std::printf("weber fit: pooled nu = %.2f, pooled MSE = %.6f -> %s\n", report.pooled_nu,
              report.pooled_mse, (opt.in / "weber.csv").string().c_str());
  return 0;
}

struct PlotCliOptions {
  fs::path in;
  fs::path human_systems;
  std::string figures = "auto";
  double weber = 0.31;
};

int run_plot(const PlotCliOptions& opt) {
  numsig::PlotOptions plot;
  if (opt.figures == "auto") {
    plot.consensus = fs::exists(opt.in / "consensus.csv");
  } else {
    plot.cost_frontier = plot.term_frequency = plot.consensus = false;
    for (const auto& name : numsig::split(opt.figures, ',')) {
      if (name == "frontier") plot.cost_frontier = true;
      else if (name == "terms") plot.term_frequency = true;
      else if (name == "consensus") plot.consensus = true;
      else if (name == "all") plot.cost_frontier = plot.term_frequency = plot.consensus = true;
      else throw std::runtime_error("unknown figure '" + name + "'");
    }
  }
  if (!opt.human_systems.empty()) {
    const numsig::LoadedRun run = numsig::load_run(opt.in);
    plot.human_costs = numsig::human_system_costs(
        numsig::ingest_human_systems(opt.human_systems, run.line), run.prior, run.line,
        opt.weber);
  }
  for (const auto& path : numsig::emit_plots(opt.in, plot)) {
    std::printf("plot -> %s\n", path.string().c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numsig: reinforcement-learning signaling games over numeral systems"};
  app.require_subcommand(1);

  TrainOptions train_opt;
  fs::path train_config;
  CLI::App* train = app.add_subcommand("train", "Train independent sender-listener pairs");
  train->add_option("--config", train_config, "JSON config; flags override its values");
  add_train_options(train, train_opt);

  FrontierOptions frontier_opt;
  CLI::App* frontier =
      app.add_subcommand("frontier", "Best/worst hypothetical systems per term count");
  frontier->add_option("--prior", frontier_opt.prior, "Need prior spec");
  frontier->add_option("--human-systems", frontier_opt.human_systems,
                       "Human systems file (cap/maxent priors)");
  frontier->add_option("--maxent-language", frontier_opt.maxent_language, "MaxEnt language");
  frontier->add_option("--out", frontier_opt.out, "Output directory")->required();
  frontier->add_option("--kind", frontier_opt.kind, "exact, approx or both")
      ->check(CLI::IsMember({"exact", "approx", "both"}));
  frontier->add_option("--terms-max", frontier_opt.terms_max, "Largest term count");
  frontier->add_option("--restarts", frontier_opt.restarts, "Hill-climb restarts per k");
  frontier->add_option("--weber", frontier_opt.weber, "Weber fraction of approximate words");
  frontier->add_option("--line-hi", frontier_opt.line_hi, "Top of the number line");
  frontier->add_option("--seed", frontier_opt.seed, "Seed for the restarts");

  PriorsOptions priors_opt;
  CLI::App* priors = app.add_subcommand("priors", "Construct the four need priors");
  priors->add_option("--freqs", priors_opt.freqs, "Numeral frequency CSV (power-law)");
  priors->add_option("--human-systems", priors_opt.human_systems, "Human systems file (CAP)");
  priors->add_option("--word-freqs", priors_opt.word_freqs, "Word frequency CSV (MaxEnt)");
  priors->add_option("--maxent-language", priors_opt.maxent_language, "MaxEnt language");
  priors->add_option("--out", priors_opt.out, "Output directory")->required();
  priors->add_option("--line-hi", priors_opt.line_hi, "Top of the number line");
  priors->add_option("--weber", priors_opt.weber, "Weber fraction of approximate words");

  InDirOptions analyze_opt;
  CLI::App* analyze = app.add_subcommand("analyze", "Recompute costs from stored namings");
  analyze->add_option("--in", analyze_opt.in, "Run directory")->required();
  analyze->add_option("--prior", analyze_opt.prior, "Override prior spec");
  analyze->add_option("--human-systems", analyze_opt.human_systems,
                      "Human systems file (cap/maxent priors)");
  analyze->add_option("--maxent-language", analyze_opt.maxent_language, "MaxEnt language");

  InDirOptions consensus_opt;
  CLI::App* consensus = app.add_subcommand("consensus", "Correlation-clustering consensus");
  consensus->add_option("--in", consensus_opt.in, "Run directory")->required();
  consensus->add_option("--restarts", consensus_opt.restarts, "Clustering restarts");
  consensus->add_option("--seed", consensus_opt.seed, "Seed for the restarts");

  InDirOptions weber_opt;
  CLI::App* weber = app.add_subcommand("weber", "Fit the Gaussian number-sense model");
  weber->add_option("--in", weber_opt.in, "Run directory")->required();
  weber->add_flag("--standard-gaussian", weber_opt.standard_gaussian,
                  "Use the textbook Gaussian exponent instead of the verbatim one");

  PlotCliOptions plot_opt;
  CLI::App* plot = app.add_subcommand("plot", "Render SVG figures from a run directory");
  plot->add_option("--in", plot_opt.in, "Run directory")->required();
  plot->add_option("--human-systems", plot_opt.human_systems, "Overlay human systems");
  plot->add_option("--figures", plot_opt.figures,
                   "auto, all, or a comma list of frontier,terms,consensus");
  plot->add_option("--weber", plot_opt.weber, "Weber fraction for human approximate terms");

  TrainOptions all_opt;
  fs::path all_config;
  int all_restarts = 1000;
  int all_cluster_restarts = 50;
  int all_terms_max = 10;
  CLI::App* all = app.add_subcommand("all", "train + frontier + consensus + weber + plot");
  all->add_option("--config", all_config, "JSON config; flags override its values");
  add_train_options(all, all_opt);
  all->add_option("--frontier-restarts", all_restarts, "Hill-climb restarts per k");
  all->add_option("--cluster-restarts", all_cluster_restarts, "Clustering restarts");
  all->add_option("--terms-max", all_terms_max, "Largest frontier term count");

  try {
    // The config file seeds the defaults, so it must load before parsing.
    for (int i = 1; i + 1 < argc; ++i) {
      if (std::string(argv[i]) == "--config") {
        const fs::path cfg = argv[i + 1];
        load_config_file(cfg, train_opt);
        load_config_file(cfg, all_opt);
        break;
      }
    }
    app.parse(argc, argv);

    if (train->parsed()) return run_train(finalize_spec(train_opt));
    if (frontier->parsed()) return run_frontier(frontier_opt);
    if (priors->parsed()) return run_priors(priors_opt);
    if (analyze->parsed()) return run_analyze(analyze_opt);
    if (consensus->parsed()) return run_consensus(consensus_opt);
    if (weber->parsed()) return run_weber(weber_opt);
    if (plot->parsed()) return run_plot(plot_opt);
    if (all->parsed()) {
      const numsig::ExperimentSpec spec = finalize_spec(all_opt);
      if (const int rc = run_train(spec); rc != 0) return rc;

      FrontierOptions fopt;
      fopt.prior = all_opt.prior;
      fopt.human_systems = spec.human_systems_file;
      fopt.maxent_language = spec.maxent_language;
      fopt.out = spec.out_dir;
      fopt.terms_max = std::min(all_terms_max, spec.line.size());
      fopt.restarts = all_restarts;
      fopt.line_hi = spec.line.hi;
      fopt.seed = numsig::derive_seed(spec.master_seed, 0xf207);
      if (const int rc = run_frontier(fopt); rc != 0) return rc;

      InDirOptions copt;
      copt.in = spec.out_dir;
      copt.restarts = all_cluster_restarts;
      copt.seed = numsig::derive_seed(spec.master_seed, 0xc105);
      if (const int rc = run_consensus(copt); rc != 0) return rc;

      InDirOptions wopt;
      wopt.in = spec.out_dir;
      if (const int rc = run_weber(wopt); rc != 0) return rc;

      PlotCliOptions popt;
      popt.in = spec.out_dir;
      popt.human_systems = spec.human_systems_file;
      return run_plot(popt);
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
