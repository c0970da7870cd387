#include <gtest/gtest.h>

#include <random>

#include "expect_error.hpp"
#include "oracles.hpp"
#include "qattack/graph.hpp"

namespace qattack {
namespace {

Graph path(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
  return Graph(n, e);
}

TEST(Graph, DuplicatesCollapseAndEdgesAreSorted) {
  const std::vector<Edge> e{{2, 1}, {0, 1}, {1, 2}, {1, 0}};
  Graph g(3, e);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 1}, {1, 2}}));
  EXPECT_EQ(g.degree(1), 2u);
  EXPECT_TRUE(g.has_edge(2, 1));
  EXPECT_FALSE(g.has_edge(0, 2));
}

TEST(Graph, RejectsSelfLoopsAndBadIds) {
  const std::vector<Edge> loop{{1, 1}};
  EXPECT_QA_ERROR(Graph(3, loop), ErrorCode::InvalidArgument);
  const std::vector<Edge> far{{0, 3}};
  EXPECT_QA_ERROR(Graph(3, far), ErrorCode::InvalidArgument);
  EXPECT_QA_ERROR(neighbors(path(3), 7), ErrorCode::InvalidArgument);
}

TEST(Graph, NeighborsAndNonNeighborsPartitionTheOtherNodes) {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    Graph g = oracle::random_graph(15, 0.3, rng);
    for (NodeId v = 0; v < 15; ++v) {
      auto a = neighbors(g, v), b = non_neighbors(g, v);
      EXPECT_EQ(a.size() + b.size(), 14u);
      for (NodeId u : a) EXPECT_TRUE(g.has_edge(u, v));
      for (NodeId u : b) EXPECT_TRUE(u != v && !g.has_edge(u, v));
    }
  }
}

TEST(Graph, RandomNonNeighborIsUniformAndNulloptWhenSaturated) {
  std::vector<Edge> e{{0, 1}, {0, 2}, {0, 3}};
  Graph star(6, e);
  Rng rng(11);
  std::map<NodeId, int> counts;
  for (int i = 0; i < 3000; ++i) ++counts[*random_non_neighbor(star, 0, rng)];
  EXPECT_EQ(counts.size(), 2u);
  EXPECT_NEAR(counts[4], 1500, 150);
  std::vector<Edge> full{{0, 1}, {0, 2}, {1, 2}};
  EXPECT_FALSE(random_non_neighbor(Graph(3, full), 0, rng).has_value());
}

TEST(Graph, BuildGraphAssignsIdsByFirstAppearance) {
  const std::vector<std::pair<std::string, std::string>> el{{"b", "a"}, {"a", "c"}, {"c", "b"}};
  auto lg = build_graph(el);
  EXPECT_EQ(lg.labels, (std::vector<std::string>{"b", "a", "c"}));
  EXPECT_EQ(lg.graph.edge_count(), 3u);
  const std::vector<std::pair<std::string, std::string>> loop{{"x", "x"}};
  EXPECT_QA_ERROR(build_graph(loop), ErrorCode::InvalidArgument);
}

TEST(Plan, ViolationsAreReportedWithTheGeneIndex) {
  const Graph g = path(5);  // 0-1-2-3-4
  const RewiringPlan ok{{1, 0, 3}, {3, 4, 0}};
  EXPECT_FALSE(find_violation(g, ok).has_value());
  const std::vector<std::pair<RewiringPlan, std::size_t>> bad{
      {{{0, 2, 3}}, 0},             // deleted edge missing
      {{{0, 1, 0}}, 0},             // repeated node
      {{{1, 0, 2}}, 0},             // added edge already present
      {{{1, 0, 3}, {0, 1, 4}}, 1},  // same deletion twice
      {{{1, 0, 3}, {3, 1, 0}}, 1},  // deletes an edge only the plan adds
      {{{1, 0, 4}, {4, 3, 1}}, 1},  // same addition twice
      {{{9, 0, 1}}, 0},             // out of range
  };
  for (const auto& [plan, idx] : bad) {
    auto v = find_violation(g, plan);
    ASSERT_TRUE(v.has_value());
    EXPECT_EQ(v->gene, idx) << v->reason;
    try {
      validate_plan(g, plan);
      ADD_FAILURE();
    } catch (const InfeasiblePlanError& e) {
      EXPECT_EQ(e.gene_index(), idx);
    }
  }
}

TEST(Plan, ApplyPreservesEdgeCountAndReverseRestores) {
  std::mt19937_64 rng(5);
  Rng qrng(5);
  for (int rep = 0; rep < 50; ++rep) {
    Graph g = oracle::random_nonempty_graph(12, 0.35, rng);
    RewiringPlan plan;
    for (int tries = 0; tries < 40 && plan.size() < 4; ++tries) {
      const auto& e = g.edges()[uniform_index(qrng, g.edge_count())];
      const NodeId t = e.first;
      auto add = random_non_neighbor(g, t, qrng);
      if (!add) continue;
      plan.push_back({t, e.second, *add});
      if (find_violation(g, plan)) plan.pop_back();
    }
    Graph h = apply_plan(g, plan);
    EXPECT_EQ(h.edge_count(), g.edge_count());
    for (const auto& x : plan) {
      EXPECT_FALSE(h.has_edge(x.target, x.delete_peer));
      EXPECT_TRUE(h.has_edge(x.target, x.add_peer));
    }
    EXPECT_EQ(apply_plan(h, reverse_plan(plan)), g);
  }
}

}  // namespace
}  // namespace qattack
