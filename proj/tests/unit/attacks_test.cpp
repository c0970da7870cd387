#include <gtest/gtest.h>

#include <random>
#include <set>

#include "expect_error.hpp"
#include "oracles.hpp"
#include "qattack/attacks.hpp"
#include "qattack/datasets.hpp"
#include "qattack/metrics.hpp"

namespace qattack::attacks {
namespace {

const Graph& karate() {
  static const Graph g = io::load_bundled("karate").graph;
  return g;
}

TEST(RandomAttack, PlansAreFeasibleAndTouchOnlyTargets) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const HeuristicConfig cfg{5, 4, seed};
    auto out = random_attack(karate(), cfg);
    EXPECT_EQ(out.plan.size(), 4u);
    EXPECT_EQ(std::set<NodeId>(out.targets.begin(), out.targets.end()).size(), 5u);
    EXPECT_FALSE(find_violation(karate(), out.plan).has_value());
    for (const auto& x : out.plan)
      EXPECT_NE(std::find(out.targets.begin(), out.targets.end(), x.target), out.targets.end());
  }
  EXPECT_EQ(random_attack(karate(), {5, 4, 9}).plan, random_attack(karate(), {5, 4, 9}).plan);
}

TEST(CommunityAttack, DeletesInsideAndAddsAcrossCommunities) {
  const Partition p = detect::detect_fn(karate());
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto out = cda_attack(karate(), {5, 6, seed}, p);
    EXPECT_FALSE(find_violation(karate(), out.plan).has_value());
    for (const auto& x : out.plan) {
      EXPECT_EQ(p[x.delete_peer], p[x.target]);
      EXPECT_NE(p[x.add_peer], p[x.target]);
    }
  }
}

TEST(DegreeAttack, TargetsTakeTopDegreeOncePerCommunityPerTurn) {
  // Star centres 0 (deg 4) and 5 (deg 3) in community A, 10 (deg 2) in B.
  const std::vector<Edge> e{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {5, 6}, {5, 7}, {5, 8}, {10, 11}, {10, 12}, {4, 9}};
  Graph g(13, e);
  Partition p({0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1});
  EXPECT_EQ(dba_targets(g, p, 1), (std::vector<NodeId>{0}));
  EXPECT_EQ(dba_targets(g, p, 2), (std::vector<NodeId>{0, 10}));
  EXPECT_EQ(dba_targets(g, p, 3), (std::vector<NodeId>{0, 10, 5}));
  auto out = dba_attack(g, {3, 3, 1}, p);
  for (const auto& x : out.plan) {
    EXPECT_EQ(p[x.delete_peer], p[x.target]);
    EXPECT_NE(p[x.add_peer], p[x.target]);
  }
  EXPECT_QA_ERROR(dba_targets(g, p, 0), ErrorCode::Config);
}

TEST(HeuristicAttacks, StopWithWarningWhenNothingFits) {
  std::vector<Edge> e;
  for (NodeId u = 0; u < 5; ++u)
    for (NodeId v = u + 1; v < 5; ++v) e.emplace_back(u, v);
  Graph complete(5, e);
  auto out = random_attack(complete, {2, 3, 1});
  EXPECT_TRUE(out.plan.empty());
  ASSERT_EQ(out.warnings.size(), 1u);
  EXPECT_QA_ERROR(random_attack(complete, {0, 1, 1}), ErrorCode::Config);
  EXPECT_QA_ERROR(random_attack(complete, {6, 1, 1}), ErrorCode::Config);
}

TEST(Exhaustive, FindsTheMinimumOverEverySingleRewiring) {
  std::mt19937_64 rng(31);
  auto fn = detect::make_detector({detect::Algorithm::FN});
  for (int rep = 0; rep < 5; ++rep) {
    Graph g = oracle::random_nonempty_graph(9 + rep, 0.3, rng);
    double best = 1e9;
    std::size_t count = 0;
    for (NodeId t = 0; t < g.node_count(); ++t)
      for (NodeId d = 0; d < g.node_count(); ++d)
        for (NodeId a = 0; a < g.node_count(); ++a) {
          if (t == d || t == a || d == a || !g.has_edge(t, d) || g.has_edge(t, a)) continue;
          ++count;
          const RewiringGene x{t, d, a};
          Graph h = apply_plan(g, std::span(&x, 1));
          best = std::min(best, oracle::modularity(h, oracle::greedy_fn(h)));
        }
    EXPECT_EQ(feasible_gene_count(g), count);
    auto r = exhaustive_best_rewiring(g, *fn, 0);
    EXPECT_EQ(r.evaluated, count);
    EXPECT_NEAR(r.q_after, best, 1e-12);
  }
  EXPECT_QA_ERROR(exhaustive_best_rewiring(karate(), *fn, 0, 10), ErrorCode::Budget);
  EXPECT_QA_ERROR(exhaustive_best_rewiring(Graph(3, std::vector<Edge>{}), *fn, 0), ErrorCode::Infeasible);
}

}  // namespace
}  // namespace qattack::attacks
