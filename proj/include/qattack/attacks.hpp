#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qattack/detect.hpp"
#include "qattack/graph.hpp"
#include "qattack/partition.hpp"

namespace qattack::attacks {

struct HeuristicConfig {
  std::uint32_t target_count = 1;  // K
  std::uint32_t budget = 0;        // T
  std::uint64_t seed = 0;
};

inline constexpr std::uint32_t kRetryCap = 1000;

struct AttackOutcome {
  RewiringPlan plan;
  std::vector<NodeId> targets;  // V_t
  std::vector<std::string> warnings;
};

AttackOutcome random_attack(const Graph& g, const HeuristicConfig& cfg);

// `detected` is the partition of the original graph.
AttackOutcome cda_attack(const Graph& g, const HeuristicConfig& cfg, const Partition& detected);
AttackOutcome cda_attack(const Graph& g, const HeuristicConfig& cfg, const detect::Detector& detector);

std::vector<NodeId> dba_targets(const Graph& g, const Partition& detected, std::uint32_t k);
AttackOutcome dba_attack(const Graph& g, const HeuristicConfig& cfg, const Partition& detected);
AttackOutcome dba_attack(const Graph& g, const HeuristicConfig& cfg, const detect::Detector& detector);

// Seed used by the Detector overloads for the one-off detection.
std::uint64_t detection_seed(const HeuristicConfig& cfg);

struct ExhaustiveResult {
  RewiringGene gene;
  double q_after = 0.0;
  std::size_t evaluated = 0;
};

inline constexpr std::size_t kDefaultExhaustiveLimit = 200000;

// Number of single-gene plans: sum_i k_i (n - 1 - k_i).
std::size_t feasible_gene_count(const Graph& g);

ExhaustiveResult exhaustive_best_rewiring(const Graph& g, const detect::Detector& detector,
                                          std::uint64_t seed,
                                          std::size_t max_genes = kDefaultExhaustiveLimit);

}  // namespace qattack::attacks
