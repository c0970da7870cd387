#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qattack/attacks.hpp"
#include "qattack/detect.hpp"
#include "qattack/graph.hpp"
#include "qattack/rng.hpp"

namespace qattack::ga {

enum class SingleGeneMode {
  Exhaustive,  // enumerate when small enough, else fall back to the GA
  Genetic,     // always evolve (crossover swaps add peers between same-target genes)
};

struct GaConfig {
  std::uint32_t pop_size = 100;
  std::uint32_t generations = 500;
  double crossover_rate = 0.8;
  double mutation_rate = 0.1;
  std::uint32_t budget = 1;
  double elitism_fraction = 0.10;
  std::uint64_t seed = 0;
  std::uint32_t fitness_samples = 1;
  SingleGeneMode single_gene = SingleGeneMode::Exhaustive;
  std::size_t exhaustive_limit = attacks::kDefaultExhaustiveLimit;
  bool memoize = true;  // cache Q per plan for deterministic detectors
  bool audit = false;   // check every chromosome each generation
  unsigned jobs = 1;
};

void validate(const GaConfig& cfg);

struct Chromosome {
  RewiringPlan plan;
  std::optional<double> fitness;
  std::optional<double> modularity;
};

using Population = std::vector<Chromosome>;

inline double fitness_from_modularity(double q) { return std::exp(-q); }

// A uniformly random feasible gene that does not clash with `others`.
std::optional<RewiringGene> random_gene(const Graph& g, std::span<const RewiringGene> others,
                                        Rng& rng, std::uint32_t tries = 1000);

Population initialize(const Graph& g, const GaConfig& cfg, Rng& rng);

// Roulette wheel: `draws` indices with probability f_i / sum f.
std::vector<std::size_t> select(const Population& pop, std::size_t draws, Rng& rng);

// Returns true when the tails were swapped.
bool crossover(Chromosome& a, Chromosome& b, double rate, Rng& rng);

// Single-gene variant: swaps add peers of genes sharing a target.
bool crossover_single(const Graph& g, Chromosome& a, Chromosome& b, double rate, Rng& rng);

enum class MutationKind { Deletion = 0, Addition = 1, Reconnection = 2 };

struct MutationStats {
  std::array<std::uint64_t, 3> chosen{};   // per kind, attempts
  std::array<std::uint64_t, 3> applied{};  // per kind, successful redraws
};

inline constexpr std::uint32_t kMutationRetries = 100;

// Returns true when any gene changed.
bool mutate(const Graph& g, Chromosome& c, double rate, Rng& rng, MutationStats* stats = nullptr);
bool mutate_gene(const Graph& g, RewiringPlan& plan, std::size_t index, MutationKind kind, Rng& rng);

// Offspring sorted by fitness, worst floor(fraction*n) replaced by parents' best.
Population elitism(const Population& parents, Population offspring, double fraction);

struct QAttackResult {
  RewiringPlan best_plan;
  double best_fitness = 0.0;
  double best_modularity = 0.0;
  std::vector<double> history;  // population best after elitism, generations + 1 entries
  bool exhaustive = false;
  std::size_t evaluations = 0;
  std::size_t cache_hits = 0;
};

QAttackResult run_qattack(const Graph& g, const detect::Detector& detector, const GaConfig& cfg);

}  // namespace qattack::ga
