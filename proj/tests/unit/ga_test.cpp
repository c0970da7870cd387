#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "expect_error.hpp"
#include "oracles.hpp"
#include "qattack/datasets.hpp"
#include "qattack/ga.hpp"
#include "qattack/metrics.hpp"

namespace qattack::ga {
namespace {

const Graph& karate() {
  static const Graph g = io::load_bundled("karate").graph;
  return g;
}

Population with_fitness(std::vector<double> f) {
  Population pop(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) pop[i].fitness = f[i];
  return pop;
}

TEST(Selection, RouletteFrequenciesWithinThreeSigma) {
  const std::vector<double> f{0.70, 0.72, 0.75, 0.80, 0.69, 0.90, 0.71, 0.74};
  const double total = std::accumulate(f.begin(), f.end(), 0.0);
  Rng rng(1);
  const std::size_t draws = 100000;
  std::vector<std::size_t> count(f.size(), 0);
  for (auto i : select(with_fitness(f), draws, rng)) ++count[i];
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double p = f[i] / total;
    EXPECT_LE(std::abs(count[i] - draws * p), 3 * std::sqrt(draws * p * (1 - p))) << i;
  }
  Population unevaluated(3);
  EXPECT_QA_ERROR(select(unevaluated, 1, rng), ErrorCode::Internal);
}

TEST(Mutation, OperatorMixIsUniform) {
  GaConfig cfg;
  cfg.pop_size = 200;
  cfg.budget = 5;
  Rng rng(2);
  Population pop = initialize(karate(), cfg, rng);
  MutationStats stats;
  for (int round = 0; round < 10; ++round)
    for (auto& c : pop) {
      mutate(karate(), c, 1.0, rng, &stats);
      ASSERT_FALSE(find_violation(karate(), c.plan).has_value());
    }
  const double n = static_cast<double>(stats.chosen[0] + stats.chosen[1] + stats.chosen[2]);
  EXPECT_EQ(n, 200.0 * 5 * 10);
  for (int k = 0; k < 3; ++k) {
    EXPECT_LE(std::abs(stats.chosen[k] - n / 3), 3 * std::sqrt(n * (1.0 / 3) * (2.0 / 3))) << k;
    EXPECT_GT(stats.applied[k], stats.chosen[k] * 9 / 10) << k;
  }
}

TEST(Mutation, RateZeroLeavesPlansAlone) {
  GaConfig cfg;
  cfg.pop_size = 10;
  cfg.budget = 3;
  Rng rng(3);
  Population pop = initialize(karate(), cfg, rng);
  for (auto& c : pop) {
    const auto before = c.plan;
    EXPECT_FALSE(mutate(karate(), c, 0.0, rng));
    EXPECT_EQ(c.plan, before);
  }
}

TEST(Crossover, ChildrenStayFeasibleAndKeepParentGenes) {
  GaConfig cfg;
  cfg.pop_size = 100;
  cfg.budget = 6;
  Rng rng(4);
  Population pop = initialize(karate(), cfg, rng);
  int swapped = 0;
  for (std::size_t k = 0; k + 1 < pop.size(); k += 2) {
    Chromosome a = pop[k], b = pop[k + 1];
    if (crossover(a, b, 1.0, rng)) ++swapped;
    EXPECT_FALSE(find_violation(karate(), a.plan).has_value());
    EXPECT_FALSE(find_violation(karate(), b.plan).has_value());
    for (std::size_t i = 0; i < cfg.budget; ++i) {
      EXPECT_TRUE((a.plan[i] == pop[k].plan[i] && b.plan[i] == pop[k + 1].plan[i]) ||
                  (a.plan[i] == pop[k + 1].plan[i] && b.plan[i] == pop[k].plan[i]));
    }
  }
  EXPECT_GT(swapped, 40);
  Chromosome a = pop[0], b = pop[1];
  EXPECT_FALSE(crossover(a, b, 0.0, rng));
}

TEST(Crossover, SingleGeneVariantSwapsAddPeersOfSharedTargets) {
  Chromosome a{{{0, 1, 9}}, 0.5, 0.1}, b{{{0, 2, 14}}, 0.5, 0.1};
  Rng rng(5);
  ASSERT_TRUE(crossover_single(karate(), a, b, 1.0, rng));
  EXPECT_EQ(a.plan[0], (RewiringGene{0, 1, 14}));
  EXPECT_EQ(b.plan[0], (RewiringGene{0, 2, 9}));
  EXPECT_FALSE(a.fitness.has_value());
  Chromosome c{{{1, 0, 9}}, 0.5, 0.1};
  EXPECT_FALSE(crossover_single(karate(), a, c, 1.0, rng));
}

TEST(Elitism, BestParentsReplaceWorstOffspring) {
  Population parents = with_fitness({0.1, 0.9, 0.5, 0.8, 0.2, 0.3, 0.4, 0.6, 0.7, 0.05, 0.95, 0.85, 0.15, 0.25,
                                     0.35, 0.45, 0.55, 0.65, 0.75, 0.99});
  Population offspring = with_fitness(std::vector<double>(20, 0.5));
  auto next = elitism(parents, offspring, 0.10);
  ASSERT_EQ(next.size(), 20u);
  EXPECT_EQ(*next[18].fitness, 0.99);
  EXPECT_EQ(*next[19].fitness, 0.95);
  EXPECT_EQ(*next[17].fitness, 0.5);
}

TEST(RunQAttack, HistoryIsMonotoneAndAuditPassesEveryGeneration) {
  auto fn = detect::make_detector({detect::Algorithm::FN});
  GaConfig cfg;
  cfg.pop_size = 20;
  cfg.generations = 500;
  cfg.budget = 3;
  cfg.seed = 7;
  cfg.audit = true;
  auto r = run_qattack(karate(), *fn, cfg);
  ASSERT_EQ(r.history.size(), 501u);
  for (std::size_t i = 1; i < r.history.size(); ++i) EXPECT_GE(r.history[i], r.history[i - 1]);
  EXPECT_EQ(r.history.back(), r.best_fitness);
  EXPECT_FALSE(find_violation(karate(), r.best_plan).has_value());
  EXPECT_NEAR(metrics::modularity(apply_plan(karate(), r.best_plan), detect::detect_fn(apply_plan(karate(), r.best_plan))),
              r.best_modularity, 1e-12);
  EXPECT_GT(r.cache_hits, 0u);
}

TEST(RunQAttack, DeterministicPerSeedAndAcrossThreadCounts) {
  auto lou = detect::make_detector({detect::Algorithm::LOU});
  GaConfig cfg;
  cfg.pop_size = 10;
  cfg.generations = 10;
  cfg.budget = 2;
  cfg.seed = 3;
  auto a = run_qattack(karate(), *lou, cfg);
  cfg.jobs = 3;
  auto b = run_qattack(karate(), *lou, cfg);
  EXPECT_EQ(a.best_plan, b.best_plan);
  EXPECT_EQ(a.history, b.history);
  EXPECT_EQ(a.cache_hits, 0u);
}

TEST(RunQAttack, SingleRewiringUsesExhaustiveSearch) {
  std::mt19937_64 rng(40);
  auto fn = detect::make_detector({detect::Algorithm::FN});
  Graph g = oracle::random_nonempty_graph(12, 0.3, rng);
  GaConfig cfg;
  cfg.budget = 1;
  auto r = run_qattack(g, *fn, cfg);
  EXPECT_TRUE(r.exhaustive);
  EXPECT_EQ(r.best_modularity, attacks::exhaustive_best_rewiring(g, *fn, 0).q_after);
  cfg.single_gene = SingleGeneMode::Genetic;
  cfg.generations = 30;
  cfg.pop_size = 20;
  auto s = run_qattack(g, *fn, cfg);
  EXPECT_FALSE(s.exhaustive);
  EXPECT_GE(s.best_modularity, r.best_modularity - 1e-12);
}

TEST(RunQAttack, RejectsBadConfiguration) {
  auto fn = detect::make_detector({detect::Algorithm::FN});
  GaConfig cfg;
  cfg.pop_size = 3;
  EXPECT_QA_ERROR(run_qattack(karate(), *fn, cfg), ErrorCode::Config);
  cfg = {};
  cfg.crossover_rate = 1.5;
  EXPECT_QA_ERROR(run_qattack(karate(), *fn, cfg), ErrorCode::Config);
  cfg = {};
  cfg.budget = 0;
  EXPECT_QA_ERROR(run_qattack(karate(), *fn, cfg), ErrorCode::Config);
  cfg = {};
  cfg.budget = 2;
  EXPECT_QA_ERROR(run_qattack(Graph(4, std::vector<Edge>{}), *fn, cfg), ErrorCode::Config);
}

}  // namespace
}  // namespace qattack::ga
