#include "qattack/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "parallel.hpp"
#include "qattack/attacks.hpp"
#include "qattack/datasets.hpp"
#include "qattack/error.hpp"
#include "qattack/ga.hpp"
#include "qattack/metrics.hpp"
#include "qattack/rng.hpp"

namespace qattack::harness {

using detect::Algorithm;
using nlohmann::json;

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string fixed6(const std::optional<double>& v) { return v ? fixed6(*v) : std::string(); }

double round6(double v) { return std::round(v * 1e6) / 1e6; }

json round6(const std::optional<double>& v) { return v ? json(round6(*v)) : json(nullptr); }

bool is_small(const std::string& network) { return network == "karate" || network == "dolphins"; }

const std::vector<Algorithm> kAllDetectors{Algorithm::FN, Algorithm::SOA, Algorithm::LOU, Algorithm::LPA};
const std::vector<Strategy> kAllStrategies{Strategy::RA, Strategy::CDA, Strategy::DBA, Strategy::QAttack};

std::vector<Algorithm> detectors_or(const ExperimentSpec& s, std::vector<Algorithm> fallback) {
  return s.detectors.empty() ? fallback : s.detectors;
}

std::vector<Strategy> strategies_or(const ExperimentSpec& s, std::vector<Strategy> fallback) {
  return s.strategies.empty() ? fallback : s.strategies;
}

}  // namespace

Strategy parse_strategy(const std::string& text) {
  auto t = lower(text);
  if (t == "ra") return Strategy::RA;
  if (t == "cda") return Strategy::CDA;
  if (t == "dba") return Strategy::DBA;
  if (t == "qattack" || t == "q-attack" || t == "ga") return Strategy::QAttack;
  throw Error(ErrorCode::Config, "unknown strategy '" + text + "' (expected ra, cda, dba, qattack)");
}

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::RA: return "ra";
    case Strategy::CDA: return "cda";
    case Strategy::DBA: return "dba";
    case Strategy::QAttack: return "qattack";
  }
  return "?";
}

BudgetSpec parse_budget(const std::string& text) {
  BudgetSpec b;
  std::string t = text;
  if (!t.empty() && t.back() == '%') {
    b.percent = true;
    t.pop_back();
  }
  try {
    std::size_t used = 0;
    b.value = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
  } catch (const std::exception&) {
    throw Error(ErrorCode::Config, "bad budget '" + text + "' (expected N or P%)");
  }
  if (!(b.value >= 0.0)) throw Error(ErrorCode::Config, "budget must be non-negative");
  if (!b.percent && b.value != std::floor(b.value)) throw Error(ErrorCode::Config, "absolute budget must be an integer");
  return b;
}

std::uint32_t resolve_budget(const BudgetSpec& b, std::size_t edges) {
  if (!b.percent) return static_cast<std::uint32_t>(b.value);
  const double t = std::round(b.value / 100.0 * static_cast<double>(edges));
  return std::max<std::uint32_t>(1, static_cast<std::uint32_t>(t));
}

std::string describe_budget(const BudgetSpec& b, std::size_t edges) {
  std::ostringstream out;
  if (b.percent)
    out << b.value << "% of m=" << edges << " -> T=" << resolve_budget(b, edges) << " (nearest integer, minimum 1)";
  else
    out << "T=" << resolve_budget(b, edges) << " (absolute)";
  return out.str();
}

BudgetSpec default_budget(const std::string& network, std::size_t edges) {
  const auto n = lower(network);
  if (n == "football" || n == "polbooks") return {2.0, true};
  if (is_small(n)) return {5.0, true};
  return {edges <= 300 ? 5.0 : 2.0, true};
}

std::uint32_t default_target_count(const std::string& network, std::size_t nodes) {
  const double frac = lower(network) == "karate" ? 0.15 : 0.10;
  return std::max<std::uint32_t>(1, static_cast<std::uint32_t>(std::floor(frac * static_cast<double>(nodes) + 1e-9)));
}

std::optional<std::pair<double, double>> tuned_rates(const std::string& network, Algorithm a) {
  const auto n = lower(network);
  if (n == "karate") {
    if (a == Algorithm::FN) return std::pair{0.8, 0.1};
    if (a == Algorithm::SOA) return std::pair{0.7, 0.1};
    if (a == Algorithm::LOU) return std::pair{0.7, 0.1};
  } else if (n == "dolphins") {
    if (a == Algorithm::FN) return std::pair{0.6, 0.06};
    if (a == Algorithm::SOA) return std::pair{0.6, 0.04};
    if (a == Algorithm::LOU) return std::pair{0.8, 0.1};
  }
  return std::nullopt;
}

// --- Experiment ------------------------------------------------------------

Experiment::Experiment(ExperimentSpec spec) : spec_(std::move(spec)) {
  if (spec_.eval_runs < 1) throw Error(ErrorCode::Config, "eval_runs must be at least 1");
  if (spec_.trials && *spec_.trials < 1) throw Error(ErrorCode::Config, "trials must be at least 1");
  auto net = io::load_network(spec_.network, spec_.data_dir);
  graph_ = std::move(net.graph);
  truth_ = std::move(net.ground_truth);
  labels_ = std::move(net.labels);
  name_ = lower(net.name);
  if (graph_.edge_count() == 0) throw Error(ErrorCode::Config, "network has no edges");
  // Validate detector options up front.
  for (auto a : kAllDetectors) detector(a);
}

std::unique_ptr<detect::Detector> Experiment::detector(Algorithm a) const {
  detect::DetectorSpec ds;
  ds.algorithm = a;
  bool explicit_splits = false;
  for (const auto& [k, v] : spec_.detector_options) {
    detect::apply_option(ds, k, v);
    if (lower(k) == "max_splits") explicit_splits = true;
  }
  // Stop SOA at the labelled number of groups unless told otherwise.
  if (a == Algorithm::SOA && truth_ && !explicit_splits)
    ds.spectral.max_splits =
        static_cast<std::uint32_t>(std::max<std::size_t>(1, truth_->community_count() - 1));
  return detect::make_detector(ds);
}

std::uint32_t Experiment::budget() const {
  return resolve_budget(spec_.budget.value_or(default_budget(name_, graph_.edge_count())), graph_.edge_count());
}

std::uint32_t Experiment::target_count() const {
  return spec_.target_count.value_or(default_target_count(name_, graph_.node_count()));
}

std::uint32_t Experiment::trials(Strategy s) const {
  return spec_.trials.value_or(s == Strategy::QAttack ? 10u : 50u);
}

std::pair<double, double> Experiment::rates(Algorithm a, bool table2_defaults) const {
  std::pair<double, double> r{0.8, 0.1};
  if (!table2_defaults)
    if (auto t = tuned_rates(name_, a)) r = *t;
  if (spec_.crossover_rate) r.first = *spec_.crossover_rate;
  if (spec_.mutation_rate) r.second = *spec_.mutation_rate;
  return r;
}

TrialRecord Experiment::run_trial(Strategy s, Algorithm attacker, std::uint32_t budget, std::uint32_t trial,
                                  bool table2_defaults) const {
  TrialRecord rec;
  rec.strategy = s;
  rec.attacker = attacker;
  rec.budget = budget;
  rec.trial = trial;
  rec.seed = derive_seed(spec_.seed, {seed_tag::kTrial, trial});
  const auto t0 = std::chrono::steady_clock::now();
  if (budget > 0) {
    const attacks::HeuristicConfig hc{target_count(), budget, rec.seed};
    attacks::AttackOutcome out;
    switch (s) {
      case Strategy::RA: out = attacks::random_attack(graph_, hc); break;
      case Strategy::CDA: out = attacks::cda_attack(graph_, hc, *detector(attacker)); break;
      case Strategy::DBA: out = attacks::dba_attack(graph_, hc, *detector(attacker)); break;
      case Strategy::QAttack: {
        ga::GaConfig cfg;
        cfg.pop_size = spec_.pop_size;
        cfg.generations = spec_.generations;
        std::tie(cfg.crossover_rate, cfg.mutation_rate) = rates(attacker, table2_defaults);
        cfg.budget = budget;
        cfg.seed = rec.seed;
        cfg.fitness_samples = spec_.fitness_samples;
        cfg.memoize = spec_.memoize;
        cfg.audit = spec_.audit;
        cfg.single_gene = spec_.force_genetic ? ga::SingleGeneMode::Genetic : ga::SingleGeneMode::Exhaustive;
        auto res = ga::run_qattack(graph_, *detector(attacker), cfg);
        out.plan = std::move(res.best_plan);
        rec.fitness_history = std::move(res.history);
        rec.best_fitness_q = res.best_modularity;
        rec.exhaustive = res.exhaustive;
        break;
      }
    }
    rec.plan = std::move(out.plan);
    rec.targets = std::move(out.targets);
    rec.warnings = std::move(out.warnings);
  }
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

std::vector<std::uint64_t> Experiment::evaluation_seeds(Algorithm evaluator, std::uint32_t trial) const {
  const bool stochastic = detector(evaluator)->stochastic();
  std::vector<std::uint64_t> seeds;
  for (std::uint32_t s = 0; s < (stochastic ? spec_.eval_runs : 1u); ++s)
    seeds.push_back(derive_seed(spec_.seed, {seed_tag::kEvaluate, trial, s}));
  return seeds;
}

Evaluation Experiment::evaluate(const Graph& g, Algorithm evaluator, std::uint32_t trial) const {
  auto det = detector(evaluator);
  const auto seeds = evaluation_seeds(evaluator, trial);
  double q = 0.0, nmi = 0.0;
  for (auto seed : seeds) {
    const Partition p = det->run(g, seed);
    q += metrics::modularity(g, p);
    if (truth_) nmi += metrics::nmi(p, *truth_);
  }
  Evaluation e;
  e.q = q / static_cast<double>(seeds.size());
  if (truth_) e.nmi = nmi / static_cast<double>(seeds.size());
  return e;
}

CellResult Experiment::summarize(const std::vector<TrialRecord>& trials, Algorithm evaluator) const {
  if (trials.empty()) throw Error(ErrorCode::Internal, "empty cell");
  CellResult c;
  c.strategy = trials.front().strategy;
  c.attacker = trials.front().attacker;
  c.evaluator = evaluator;
  c.budget = trials.front().budget;
  c.target_count = target_count();
  c.trials = static_cast<std::uint32_t>(trials.size());
  double qb = 0, qa = 0, nb = 0, na = 0;
  for (const auto& t : trials) {
    const auto before = evaluate(graph_, evaluator, t.trial);
    const auto after = evaluate(apply_plan(graph_, t.plan), evaluator, t.trial);
    qb += before.q;
    qa += after.q;
    if (truth_) {
      nb += *before.nmi;
      na += *after.nmi;
    }
    if (t.plan.size() < t.budget) ++c.short_plans;
  }
  const double n = static_cast<double>(trials.size());
  c.q_before = qb / n;
  c.q_after = qa / n;
  c.q_reduction = metrics::relative_reduction(c.q_before, c.q_after);
  if (truth_) {
    c.nmi_before = nb / n;
    c.nmi_after = na / n;
    c.nmi_reduction = metrics::relative_reduction(*c.nmi_before, *c.nmi_after);
  }
  return c;
}

std::string Experiment::budget_header() const {
  std::ostringstream out;
  out << "# network: " << name_ << " (n=" << graph_.node_count() << ", m=" << graph_.edge_count() << ")\n";
  out << "# budget: "
      << describe_budget(spec_.budget.value_or(default_budget(name_, graph_.edge_count())), graph_.edge_count())
      << "\n";
  out << "# targets K: " << target_count() << "\n";
  out << "# seed: " << spec_.seed << "\n";
  return out.str();
}

// --- verbs -----------------------------------------------------------------

namespace {

struct Job {
  Strategy strategy;
  Algorithm attacker;
  std::uint32_t budget;
  std::uint32_t trial;
};

// Runs all trials of all cells, then summarizes each (attacker, evaluator) pair.
std::vector<std::vector<TrialRecord>> run_jobs(const Experiment& ex, const std::vector<Job>& jobs, bool table2,
                                               std::size_t groups, const std::vector<std::size_t>& group_of) {
  std::vector<TrialRecord> records(jobs.size());
  parallel_for(jobs.size(), resolve_jobs(ex.spec().jobs), [&](std::size_t i) {
    const auto& j = jobs[i];
    records[i] = ex.run_trial(j.strategy, j.attacker, j.budget, j.trial, table2);
  });
  std::vector<std::vector<TrialRecord>> out(groups);
  for (std::size_t i = 0; i < jobs.size(); ++i) out[group_of[i]].push_back(std::move(records[i]));
  return out;
}

std::vector<CellResult> grid(const Experiment& ex, const std::vector<Strategy>& strategies,
                             const std::vector<Algorithm>& detectors, const std::vector<std::uint32_t>& budgets,
                             bool table2) {
  std::vector<Job> jobs;
  std::vector<std::size_t> group_of;
  std::size_t groups = 0;
  for (auto b : budgets)
    for (auto s : strategies)
      for (auto d : detectors) {
        for (std::uint32_t t = 0; t < ex.trials(s); ++t) {
          jobs.push_back({s, d, b, t});
          group_of.push_back(groups);
        }
        ++groups;
      }
  auto trials = run_jobs(ex, jobs, table2, groups, group_of);
  std::vector<CellResult> cells(groups);
  parallel_for(groups, resolve_jobs(ex.spec().jobs),
               [&](std::size_t g) { cells[g] = ex.summarize(trials[g], trials[g].front().attacker); });
  return cells;
}

}  // namespace

AttackReport attack(const Experiment& ex) {
  const auto dets = detectors_or(ex.spec(), {Algorithm::FN});
  const auto strats = strategies_or(ex.spec(), {Strategy::QAttack});
  if (dets.size() != 1 || strats.size() != 1)
    throw Error(ErrorCode::Config, "attack takes exactly one detector and one strategy");
  AttackReport r;
  r.trial = ex.run_trial(strats[0], dets[0], ex.budget(), 0, false);
  r.before = ex.evaluate(ex.graph(), dets[0], 0);
  r.after = ex.evaluate(apply_plan(ex.graph(), r.trial.plan), dets[0], 0);
  r.eval_seeds = ex.evaluation_seeds(dets[0], 0);
  r.target_count = ex.target_count();
  std::tie(r.crossover_rate, r.mutation_rate) = ex.rates(dets[0], false);
  return r;
}

std::vector<CellResult> sweep(const Experiment& ex) {
  auto budgets = ex.spec().budgets;
  if (budgets.empty())
    for (std::uint32_t t = 1; t <= 8; ++t) budgets.push_back(t);
  return grid(ex, strategies_or(ex.spec(), kAllStrategies), detectors_or(ex.spec(), {Algorithm::FN}), budgets,
              false);
}

std::vector<CellResult> table2(const Experiment& ex) {
  return grid(ex, strategies_or(ex.spec(), kAllStrategies), detectors_or(ex.spec(), kAllDetectors), {ex.budget()},
              true);
}

TransferMatrix transferability(const Experiment& ex) {
  TransferMatrix m;
  m.attackers = detectors_or(ex.spec(), kAllDetectors);
  m.evaluators = m.attackers;
  std::vector<Job> jobs;
  std::vector<std::size_t> group_of;
  for (std::size_t a = 0; a < m.attackers.size(); ++a)
    for (std::uint32_t t = 0; t < ex.trials(Strategy::QAttack); ++t) {
      jobs.push_back({Strategy::QAttack, m.attackers[a], ex.budget(), t});
      group_of.push_back(a);
    }
  auto trials = run_jobs(ex, jobs, true, m.attackers.size(), group_of);
  m.cells.assign(m.attackers.size(), std::vector<CellResult>(m.evaluators.size()));
  parallel_for(m.attackers.size() * m.evaluators.size(), resolve_jobs(ex.spec().jobs), [&](std::size_t i) {
    const auto a = i / m.evaluators.size(), e = i % m.evaluators.size();
    m.cells[a][e] = ex.summarize(trials[a], m.evaluators[e]);
  });
  return m;
}

std::vector<TuneResult> tune(const Experiment& ex) {
  const auto dets = detectors_or(ex.spec(), {Algorithm::FN});
  const auto& pcs = ex.spec().tune_pc;
  const auto& pms = ex.spec().tune_pm;
  std::vector<TuneResult> out(dets.size());
  std::vector<std::tuple<std::size_t, double, double>> jobs;
  for (std::size_t d = 0; d < dets.size(); ++d) {
    out[d].detector = dets[d];
    out[d].tuned_default = tuned_rates(ex.name(), dets[d]);
    for (double pc : pcs)
      for (double pm : pms) {
        out[d].cells.push_back({pc, pm, {}});
        jobs.emplace_back(d, pc, pm);
      }
  }
  std::vector<std::vector<double>> histories(jobs.size());
  parallel_for(jobs.size(), resolve_jobs(ex.spec().jobs), [&](std::size_t i) {
    auto [d, pc, pm] = jobs[i];
    ga::GaConfig cfg;
    cfg.pop_size = ex.spec().pop_size;
    cfg.generations = ex.spec().generations;
    cfg.crossover_rate = pc;
    cfg.mutation_rate = pm;
    cfg.budget = ex.budget();
    cfg.seed = derive_seed(ex.spec().seed, {seed_tag::kTrial, 0});
    cfg.fitness_samples = ex.spec().fitness_samples;
    cfg.memoize = ex.spec().memoize;
    cfg.audit = ex.spec().audit;
    cfg.single_gene = ga::SingleGeneMode::Genetic;  // curves need generations
    histories[i] = ga::run_qattack(ex.graph(), *ex.detector(dets[d]), cfg).history;
  });
  std::size_t i = 0;
  for (auto& r : out) {
    for (auto& c : r.cells) c.history = std::move(histories[i++]);
    for (std::size_t c = 1; c < r.cells.size(); ++c)
      if (r.cells[c].history.back() > r.cells[r.best].history.back()) r.best = c;
  }
  return out;
}

// --- serialization -------------------------------------------------------------

std::string to_json(const Experiment& ex, const AttackReport& r) {
  const auto& labels = ex.labels();
  json plan = json::array();
  for (const auto& x : r.trial.plan)
    plan.push_back({{"target", labels[x.target]}, {"delete", labels[x.delete_peer]}, {"add", labels[x.add_peer]}});
  json targets = json::array();
  for (auto v : r.trial.targets) targets.push_back(labels[v]);
  json history = json::array();
  for (double f : r.trial.fitness_history) history.push_back(round6(f));
  json j{
      {"network", ex.name()},
      {"strategy", strategy_name(r.trial.strategy)},
      {"detector", detect::algorithm_name(r.trial.attacker)},
      {"budget", r.trial.budget},
      {"budget_rule", describe_budget(ex.spec().budget.value_or(default_budget(ex.name(), ex.graph().edge_count())),
                                      ex.graph().edge_count())},
      {"k", r.target_count},
      {"seed", ex.spec().seed},
      {"trial_seed", r.trial.seed},
      {"eval_seeds", r.eval_seeds},
      {"plan", plan},
      {"targets", targets},
      {"q_before", round6(r.before.q)},
      {"q_after", round6(r.after.q)},
      {"q_reduction", round6(metrics::relative_reduction(r.before.q, r.after.q))},
      {"nmi_before", round6(r.before.nmi)},
      {"nmi_after", round6(r.after.nmi)},
      {"nmi_reduction", r.before.nmi ? json(round6(metrics::relative_reduction(*r.before.nmi, *r.after.nmi)))
                                     : json(nullptr)},
      {"fitness_history", history},
      {"wall_time_s", round6(r.trial.seconds)},
      {"warnings", r.trial.warnings},
  };
  if (r.trial.strategy == Strategy::QAttack) {
    j["ga"] = {{"pop_size", ex.spec().pop_size},
               {"generations", ex.spec().generations},
               {"pc", r.crossover_rate},
               {"pm", r.mutation_rate},
               {"fitness_samples", ex.spec().fitness_samples},
               {"exhaustive", r.trial.exhaustive},
               {"optimizer_q", round6(r.trial.best_fitness_q)}};
  }
  return j.dump(2) + "\n";
}

std::string cells_to_csv(const Experiment& ex, const std::vector<CellResult>& cells) {
  std::ostringstream out;
  out << ex.budget_header();
  out << "strategy,attacker,evaluator,T,K,trials,q_before,q_after,q_reduction,nmi_before,nmi_after,nmi_reduction,"
         "short_plans\n";
  for (const auto& c : cells)
    out << strategy_name(c.strategy) << ',' << detect::algorithm_name(c.attacker) << ','
        << detect::algorithm_name(c.evaluator) << ',' << c.budget << ',' << c.target_count << ',' << c.trials << ','
        << fixed6(c.q_before) << ',' << fixed6(c.q_after) << ',' << fixed6(c.q_reduction) << ','
        << fixed6(c.nmi_before) << ',' << fixed6(c.nmi_after) << ',' << fixed6(c.nmi_reduction) << ','
        << c.short_plans << '\n';
  return out.str();
}

std::string transfer_to_csv(const Experiment& ex, const TransferMatrix& m) {
  std::ostringstream out;
  out << ex.budget_header();
  out << "# cells: mean relative Q reduction of Q-Attack(row) networks under the column detector\n";
  out << "attacked";
  for (auto e : m.evaluators) out << ',' << detect::algorithm_name(e);
  out << ",average,average_minus_self\n";
  for (std::size_t a = 0; a < m.attackers.size(); ++a) {
    out << "qattack(" << detect::algorithm_name(m.attackers[a]) << ')';
    double all = 0, others = 0;
    std::size_t n_others = 0;
    for (std::size_t e = 0; e < m.evaluators.size(); ++e) {
      const double v = m.cells[a][e].q_reduction;
      out << ',' << fixed6(v);
      all += v;
      if (m.evaluators[e] != m.attackers[a]) {
        others += v;
        ++n_others;
      }
    }
    out << ',' << fixed6(all / static_cast<double>(m.evaluators.size())) << ','
        << (n_others ? fixed6(others / static_cast<double>(n_others)) : std::string()) << '\n';
  }
  return out.str();
}

std::string tune_to_csv(const Experiment& ex, const std::vector<TuneResult>& results) {
  std::ostringstream out;
  out << ex.budget_header();
  for (const auto& r : results) {
    const auto& b = r.cells[r.best];
    out << "# best " << detect::algorithm_name(r.detector) << ": pc=" << b.pc << " pm=" << b.pm
        << " terminal_fitness=" << fixed6(b.history.back());
    if (r.tuned_default) out << " (tuned default: pc=" << r.tuned_default->first << " pm=" << r.tuned_default->second << ")";
    out << '\n';
  }
  out << "detector,pc,pm,generation,best_fitness\n";
  for (const auto& r : results)
    for (const auto& c : r.cells)
      for (std::size_t g = 0; g < c.history.size(); ++g)
        out << detect::algorithm_name(r.detector) << ',' << c.pc << ',' << c.pm << ',' << g << ','
            << fixed6(c.history[g]) << '\n';
  return out.str();
}

// --- spec parsing ------------------------------------------------------------

ExperimentSpec spec_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text.empty() ? std::string("{}") : json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, std::string("spec is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::Config, "spec must be a JSON object");
  ExperimentSpec s;
  auto str = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  try {
    for (auto& [key, v] : j.items()) {
      if (key == "network") s.network = v.get<std::string>();
      else if (key == "data_dir") s.data_dir = v.get<std::string>();
      else if (key == "detector") s.detectors = {detect::parse_algorithm(v.get<std::string>())};
      else if (key == "detectors") {
        s.detectors.clear();
        for (auto& d : v) s.detectors.push_back(detect::parse_algorithm(d.get<std::string>()));
      } else if (key == "detector_options") {
        if (v.is_object()) {
          for (auto& [k, o] : v.items()) s.detector_options.emplace_back(k, str(o));
        } else {
          for (auto& o : v) {
            auto kv = o.get<std::string>();
            auto eq = kv.find('=');
            if (eq == std::string::npos) throw Error(ErrorCode::Config, "detector option '" + kv + "' is not key=value");
            s.detector_options.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
          }
        }
      } else if (key == "strategy") s.strategies = {parse_strategy(v.get<std::string>())};
      else if (key == "strategies") {
        s.strategies.clear();
        for (auto& d : v) s.strategies.push_back(parse_strategy(d.get<std::string>()));
      } else if (key == "budget") s.budget = parse_budget(str(v));
      else if (key == "budgets") s.budgets = v.get<std::vector<std::uint32_t>>();
      else if (key == "k") s.target_count = v.get<std::uint32_t>();
      else if (key == "trials") s.trials = v.get<std::uint32_t>();
      else if (key == "seed") s.seed = v.get<std::uint64_t>();
      else if (key == "pop") s.pop_size = v.get<std::uint32_t>();
      else if (key == "gens") s.generations = v.get<std::uint32_t>();
      else if (key == "pc") s.crossover_rate = v.get<double>();
      else if (key == "pm") s.mutation_rate = v.get<double>();
      else if (key == "fitness_samples") s.fitness_samples = v.get<std::uint32_t>();
      else if (key == "memoize") s.memoize = v.get<bool>();
      else if (key == "force_genetic") s.force_genetic = v.get<bool>();
      else if (key == "audit") s.audit = v.get<bool>();
      else if (key == "eval_runs") s.eval_runs = v.get<std::uint32_t>();
      else if (key == "jobs") s.jobs = v.get<unsigned>();
      else if (key == "tune_pc") s.tune_pc = v.get<std::vector<double>>();
      else if (key == "tune_pm") s.tune_pm = v.get<std::vector<double>>();
      else if (key == "export") s.export_prefix = v.get<std::string>();
      else throw Error(ErrorCode::Config, "unknown spec key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, std::string("bad spec value: ") + e.what());
  }
  return s;
}

VerbOutput run_verb(const std::string& verb, const ExperimentSpec& spec) {
  Experiment ex(spec);
  VerbOutput out;
  if (verb == "attack") {
    auto r = attack(ex);
    out.text = to_json(ex, r);
    if (r.trial.plan.size() < r.trial.budget) out.exit_code = 3;
    if (!spec.export_prefix.empty()) {
      const Graph adv = apply_plan(ex.graph(), r.trial.plan);
      std::ofstream el(spec.export_prefix + ".edgelist"), pj(spec.export_prefix + ".plan.json");
      if (!el || !pj) throw Error(ErrorCode::Io, "cannot write export files at " + spec.export_prefix);
      el << "# adversarial network: " << ex.spec().network << ", strategy " << strategy_name(r.trial.strategy)
         << ", T=" << r.trial.plan.size() << "\n"
         << io::write_edgelist(adv, ex.labels());
      pj << out.text;
    }
  } else if (verb == "sweep") {
    out.text = cells_to_csv(ex, sweep(ex));
  } else if (verb == "table2") {
    out.text = cells_to_csv(ex, table2(ex));
  } else if (verb == "transfer") {
    out.text = transfer_to_csv(ex, transferability(ex));
  } else if (verb == "tune") {
    out.text = tune_to_csv(ex, tune(ex));
  } else {
    throw Error(ErrorCode::Config, "unknown verb '" + verb + "' (expected attack, sweep, table2, transfer, tune)");
  }
  return out;
}

}  // namespace qattack::harness
