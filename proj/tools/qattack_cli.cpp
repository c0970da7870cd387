// Command-line front end. Talks to the library only through the C API.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qattack/qattack.h"

using nlohmann::json;

namespace {

struct Options {
  std::string network;
  std::string data_dir;
  std::vector<std::string> detectors;
  std::vector<std::string> detector_opts;
  std::vector<std::string> strategies;
  std::string budget;
  std::vector<unsigned> budgets;
  int k = -1;
  int trials = -1;
  uint64_t seed = 1;
  std::string out;
  unsigned jobs = 1;
  int pop = -1;
  int gens = -1;
  double pc = -1;
  double pm = -1;
  int fitness_samples = -1;
  int eval_runs = -1;
  bool no_memo = false;
  bool force_genetic = false;
  bool audit = false;
  std::string export_prefix;
  std::vector<double> tune_pc;
  std::vector<double> tune_pm;
};

void add_common(CLI::App* sub, Options& o, bool ga_flags) {
  sub->add_option("--network,-n", o.network, "Bundled network name or path to a .gml or edge list file")->required();
  sub->add_option("--data-dir", o.data_dir, "Directory searched for networks that are not bundled");
  sub->add_option("--detector,-d", o.detectors, "fn, soa, louvain or lpa (repeatable)");
  sub->add_option("--detector-opt", o.detector_opts, "Detector option as key=value (repeatable)");
  sub->add_option("--k", o.k, "Number of target nodes")->check(CLI::NonNegativeNumber);
  sub->add_option("--trials", o.trials, "Independent trials per cell")->check(CLI::PositiveNumber);
  sub->add_option("--seed", o.seed, "Master seed");
  sub->add_option("--out,-o", o.out, "Write the result here instead of stdout");
  sub->add_option("--jobs,-j", o.jobs, "Worker threads, 0 for all cores");
  sub->add_option("--eval-runs", o.eval_runs, "Detector reruns when scoring a stochastic detector")
      ->check(CLI::PositiveNumber);
  if (!ga_flags) return;
  sub->add_option("--pop", o.pop, "Population size")->check(CLI::PositiveNumber);
  sub->add_option("--gens", o.gens, "Generations")->check(CLI::NonNegativeNumber);
  sub->add_option("--pc", o.pc, "Crossover rate")->check(CLI::Range(0.0, 1.0));
  sub->add_option("--pm", o.pm, "Per-gene mutation rate")->check(CLI::Range(0.0, 1.0));
  sub->add_option("--fitness-samples", o.fitness_samples, "Detector runs averaged per fitness evaluation")
      ->check(CLI::PositiveNumber);
  sub->add_flag("--no-memo", o.no_memo, "Disable fitness memoization");
  sub->add_flag("--force-genetic", o.force_genetic, "Run the GA even when exhaustive search is possible");
  sub->add_flag("--audit", o.audit, "Check every chromosome for feasibility each generation");
}

json build_spec(const Options& o) {
  json s;
  s["network"] = o.network;
  if (!o.data_dir.empty()) s["data_dir"] = o.data_dir;
  if (!o.detectors.empty()) s["detectors"] = o.detectors;
  if (!o.detector_opts.empty()) s["detector_options"] = o.detector_opts;
  if (!o.strategies.empty()) s["strategies"] = o.strategies;
  if (!o.budget.empty()) s["budget"] = o.budget;
  if (!o.budgets.empty()) s["budgets"] = o.budgets;
  if (o.k >= 0) s["k"] = o.k;
  if (o.trials > 0) s["trials"] = o.trials;
  s["seed"] = o.seed;
  s["jobs"] = o.jobs;
  if (o.pop > 0) s["pop"] = o.pop;
  if (o.gens >= 0) s["gens"] = o.gens;
  if (o.pc >= 0) s["pc"] = o.pc;
  if (o.pm >= 0) s["pm"] = o.pm;
  if (o.fitness_samples > 0) s["fitness_samples"] = o.fitness_samples;
  if (o.eval_runs > 0) s["eval_runs"] = o.eval_runs;
  if (o.no_memo) s["memoize"] = false;
  if (o.force_genetic) s["force_genetic"] = true;
  if (o.audit) s["audit"] = true;
  if (!o.export_prefix.empty()) s["export"] = o.export_prefix;
  if (!o.tune_pc.empty()) s["tune_pc"] = o.tune_pc;
  if (!o.tune_pm.empty()) s["tune_pm"] = o.tune_pm;
  return s;
}

int exit_code_for(qa_status s) {
  switch (s) {
    case QA_ERR_INFEASIBLE:
      return 3;
    case QA_ERR_INVALID_ARGUMENT:
    case QA_ERR_CONFIG:
    case QA_ERR_PARSE:
    case QA_ERR_IO:
    case QA_ERR_CHECKSUM:
    case QA_ERR_BUDGET:
      return 2;
    default:
      return 1;
  }
}

int run(const std::string& verb, const Options& o) {
  const std::string spec = build_spec(o).dump();
  qa_buffer* buf = nullptr;
  int code = 0;
  const qa_status s = qa_harness_run(verb.c_str(), spec.c_str(), &buf, &code);
  if (s != QA_OK) {
    std::cerr << "qattack: " << qa_status_string(s) << ": " << qa_last_error() << "\n";
    return exit_code_for(s);
  }
  const std::string text(qa_buffer_data(buf), qa_buffer_size(buf));
  qa_buffer_free(buf);
  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!(f << text)) {
      std::cerr << "qattack: cannot write " << o.out << "\n";
      return 2;
    }
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Community detection attacks by link rewiring"};
  app.set_version_flag("--version", std::string(qa_version()));
  app.require_subcommand(1);
  Options o;
  std::string verb;

  auto* attack = app.add_subcommand("attack", "Run one strategy against one detector (JSON output)");
  add_common(attack, o, true);
  attack->add_option("--strategy,-s", o.strategies, "ra, cda, dba or qattack")->expected(1);
  attack->add_option("--budget,-T", o.budget, "Rewirings as a count or a percentage of edges, e.g. 4 or 5%");
  attack->add_option("--export", o.export_prefix, "Write <prefix>.edgelist and <prefix>.plan.json");

  auto* sweep = app.add_subcommand("sweep", "Q and NMI reduction across budgets (CSV output)");
  add_common(sweep, o, true);
  sweep->add_option("--strategy,-s", o.strategies, "Strategies to include (repeatable)");
  sweep->add_option("--budgets", o.budgets, "Absolute budgets to sweep (repeatable)");

  auto* table2 = app.add_subcommand("table2", "Every strategy against every detector (CSV output)");
  add_common(table2, o, true);
  table2->add_option("--strategy,-s", o.strategies, "Strategies to include (repeatable)");
  table2->add_option("--budget,-T", o.budget, "Rewiring budget");

  auto* transfer = app.add_subcommand("transfer", "Q-Attack transferability matrix (CSV output)");
  add_common(transfer, o, true);
  transfer->add_option("--budget,-T", o.budget, "Rewiring budget");

  auto* tune = app.add_subcommand("tune", "Grid search over crossover and mutation rates (CSV output)");
  add_common(tune, o, true);
  tune->add_option("--budget,-T", o.budget, "Rewiring budget");
  tune->add_option("--tune-pc", o.tune_pc, "Crossover rates to try (repeatable)");
  tune->add_option("--tune-pm", o.tune_pm, "Mutation rates to try (repeatable)");

  for (auto* sub : {attack, sweep, table2, transfer, tune})
    sub->final_callback([&verb, sub] { verb = sub->get_name(); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  return run(verb, o);
}
