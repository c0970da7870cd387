#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qattack/detect.hpp"
#include "qattack/graph.hpp"

namespace qattack::harness {

enum class Strategy { RA, CDA, DBA, QAttack };
Strategy parse_strategy(const std::string& text);
const char* strategy_name(Strategy s);

struct BudgetSpec {
  double value = 0.0;
  bool percent = false;
};

// "4" or "5%".
BudgetSpec parse_budget(const std::string& text);
// Percentages round to the nearest integer, minimum 1.
std::uint32_t resolve_budget(const BudgetSpec& b, std::size_t edges);
std::string describe_budget(const BudgetSpec& b, std::size_t edges);

// 5% of links for small networks, 2% for the larger ones.
BudgetSpec default_budget(const std::string& network, std::size_t edges);
// 15% of nodes for karate, 10% otherwise (rounded down).
std::uint32_t default_target_count(const std::string& network, std::size_t nodes);
// Pre-tuned (Pc, Pm) for the bundled networks, empty when none is known.
std::optional<std::pair<double, double>> tuned_rates(const std::string& network, detect::Algorithm a);

struct ExperimentSpec {
  std::string network = "karate";
  std::filesystem::path data_dir;
  std::vector<detect::Algorithm> detectors;  // empty: verb default
  std::vector<std::pair<std::string, std::string>> detector_options;
  std::vector<Strategy> strategies;  // empty: verb default
  std::optional<BudgetSpec> budget;
  std::vector<std::uint32_t> budgets;  // sweep schedule, default 1..8
  std::optional<std::uint32_t> target_count;
  std::optional<std::uint32_t> trials;  // default 50 for heuristics, 10 for Q-Attack
  std::uint64_t seed = 1;
  std::uint32_t pop_size = 100;
  std::uint32_t generations = 500;
  std::optional<double> crossover_rate;
  std::optional<double> mutation_rate;
  std::uint32_t fitness_samples = 1;
  bool memoize = true;
  bool force_genetic = false;  // skip exhaustive search at T = 1
  bool audit = false;
  std::uint32_t eval_runs = 10;  // detector runs per evaluation for stochastic detectors
  unsigned jobs = 1;
  std::vector<double> tune_pc{0.5, 0.6, 0.7, 0.8};
  std::vector<double> tune_pm{0.04, 0.06, 0.08, 0.1};
  std::string export_prefix;  // attack verb: writes <prefix>.edgelist and <prefix>.plan.json
};

struct Evaluation {
  double q = 0.0;
  std::optional<double> nmi;
};

struct TrialRecord {
  Strategy strategy = Strategy::RA;
  detect::Algorithm attacker = detect::Algorithm::FN;
  std::uint32_t budget = 0;
  std::uint32_t trial = 0;
  std::uint64_t seed = 0;
  RewiringPlan plan;
  std::vector<NodeId> targets;
  std::vector<double> fitness_history;
  double best_fitness_q = 0.0;  // modularity seen by the optimizer
  bool exhaustive = false;
  std::vector<std::string> warnings;
  double seconds = 0.0;
};

struct CellResult {
  Strategy strategy = Strategy::RA;
  detect::Algorithm attacker = detect::Algorithm::FN;
  detect::Algorithm evaluator = detect::Algorithm::FN;
  std::uint32_t budget = 0;
  std::uint32_t target_count = 0;
  std::uint32_t trials = 0;
  double q_before = 0.0;
  double q_after = 0.0;
  double q_reduction = 0.0;
  std::optional<double> nmi_before, nmi_after, nmi_reduction;
  std::size_t short_plans = 0;  // trials that returned fewer than T rewirings
};

// Loads the network and runs trials; everything is derived from spec.seed.
class Experiment {
 public:
  explicit Experiment(ExperimentSpec spec);

  const ExperimentSpec& spec() const { return spec_; }
  const Graph& graph() const { return graph_; }
  const std::optional<Partition>& ground_truth() const { return truth_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& name() const { return name_; }

  std::unique_ptr<detect::Detector> detector(detect::Algorithm a) const;
  std::uint32_t budget() const;
  std::uint32_t target_count() const;
  std::uint32_t trials(Strategy s) const;
  std::pair<double, double> rates(detect::Algorithm a, bool table2_defaults) const;

  TrialRecord run_trial(Strategy s, detect::Algorithm attacker, std::uint32_t budget, std::uint32_t trial,
                        bool table2_defaults) const;
  // Mean over the evaluation seeds of trial `trial` (one run when deterministic).
  Evaluation evaluate(const Graph& g, detect::Algorithm evaluator, std::uint32_t trial) const;
  std::vector<std::uint64_t> evaluation_seeds(detect::Algorithm evaluator, std::uint32_t trial) const;

  CellResult summarize(const std::vector<TrialRecord>& trials, detect::Algorithm evaluator) const;
  std::string budget_header() const;

 private:
  ExperimentSpec spec_;
  Graph graph_;
  std::optional<Partition> truth_;
  std::vector<std::string> labels_;
  std::string name_;
};

struct AttackReport {
  TrialRecord trial;
  Evaluation before, after;
  std::vector<std::uint64_t> eval_seeds;
  std::uint32_t target_count = 0;
  double crossover_rate = 0.0, mutation_rate = 0.0;
};

AttackReport attack(const Experiment& ex);
std::vector<CellResult> sweep(const Experiment& ex);
std::vector<CellResult> table2(const Experiment& ex);

struct TransferMatrix {
  std::vector<detect::Algorithm> attackers, evaluators;
  std::vector<std::vector<CellResult>> cells;  // [attacker][evaluator]
};
TransferMatrix transferability(const Experiment& ex);

struct TuneCell {
  double pc = 0.0, pm = 0.0;
  std::vector<double> history;
};
struct TuneResult {
  detect::Algorithm detector = detect::Algorithm::FN;
  std::vector<TuneCell> cells;
  std::size_t best = 0;
  std::optional<std::pair<double, double>> tuned_default;
};
std::vector<TuneResult> tune(const Experiment& ex);

// Serialization (metric values at 6 decimals).
std::string to_json(const Experiment& ex, const AttackReport& r);
std::string cells_to_csv(const Experiment& ex, const std::vector<CellResult>& cells);
std::string transfer_to_csv(const Experiment& ex, const TransferMatrix& m);
std::string tune_to_csv(const Experiment& ex, const std::vector<TuneResult>& r);

struct VerbOutput {
  std::string text;
  int exit_code = 0;  // 0 ok, 3 when an attack could not place its full budget
};

// JSON object of spec fields; unknown keys are rejected.
ExperimentSpec spec_from_json(const std::string& json_text);
VerbOutput run_verb(const std::string& verb, const ExperimentSpec& spec);

}  // namespace qattack::harness
