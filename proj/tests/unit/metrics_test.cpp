#include <gtest/gtest.h>

#include <random>

#include "expect_error.hpp"
#include "oracles.hpp"
#include "qattack/metrics.hpp"

namespace qattack {
namespace {

TEST(Modularity, MatchesDenseDefinitionOnRandomGraphs) {
  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 2 + rep % 25;
    Graph g = oracle::random_nonempty_graph(n, 0.25, rng);
    auto labels = oracle::random_labels(n, 1 + rep % 5, rng);
    EXPECT_NEAR(metrics::modularity(g, Partition(labels)), oracle::modularity(g, labels), 1e-12);
  }
}

TEST(Modularity, CommunityAndMatrixFormsAgreeForBisections) {
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 3 + rep % 40;
    Graph g = oracle::random_nonempty_graph(n, 0.2, rng);
    auto labels = oracle::random_labels(n, 2, rng);
    std::vector<int> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = labels[i] ? 1 : -1;
    EXPECT_NEAR(metrics::modularity(g, Partition(labels)), metrics::modularity_matrix(g, s), 1e-10);
  }
}

TEST(Modularity, SingleCommunityIsZeroAndTwoTrianglesIsKnown) {
  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 20; ++rep) {
    Graph g = oracle::random_nonempty_graph(10, 0.3, rng);
    EXPECT_NEAR(metrics::modularity(g, Partition::single(10)), 0.0, 1e-15);
  }
  // Two triangles joined by one edge: Q = 2 * (3/7 - (7/14)^2) = 5/14.
  const std::vector<Edge> e{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}};
  Graph g(6, e);
  EXPECT_NEAR(metrics::modularity(g, Partition({0, 0, 0, 1, 1, 1})), 5.0 / 14.0, 1e-15);
}

TEST(Modularity, ErrorPaths) {
  Graph empty(3, std::vector<Edge>{});
  EXPECT_QA_ERROR(metrics::modularity(empty, Partition::single(3)), ErrorCode::UndefinedMetric);
  const std::vector<Edge> e{{0, 1}};
  Graph g(3, e);
  EXPECT_QA_ERROR(metrics::modularity(g, Partition::single(2)), ErrorCode::InvalidArgument);
  const std::vector<int> zero{1, 0, -1};
  EXPECT_QA_ERROR(metrics::modularity_matrix(g, zero), ErrorCode::InvalidArgument);
}

TEST(Nmi, MatchesEntropyDefinitionOverAllSmallPartitionPairs) {
  for (std::size_t n = 1; n <= 5; ++n) {
    auto all = oracle::all_partitions(n);
    for (const auto& x : all)
      for (const auto& y : all)
        EXPECT_NEAR(metrics::nmi(Partition(x), Partition(y)), oracle::nmi(x, y), 1e-12) << "n=" << n;
  }
}

TEST(Nmi, IdentitySymmetryAndRange) {
  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 2 + rep % 60;
    Partition x(oracle::random_labels(n, 1 + rep % 7, rng)), y(oracle::random_labels(n, 1 + rep % 4, rng));
    EXPECT_EQ(metrics::nmi(x, x), 1.0);
    const double a = metrics::nmi(x, y), b = metrics::nmi(y, x);
    EXPECT_NEAR(a, b, 1e-12);
    EXPECT_GE(a, 0.0);
    EXPECT_LE(a, 1.0);
  }
}

TEST(Nmi, LabelPermutationInvariantAndDegenerateFlag) {
  Partition a({0, 0, 1, 1, 2}), b({7, 7, 3, 3, 5});
  EXPECT_EQ(metrics::nmi(a, b), 1.0);
  auto r = metrics::nmi_checked(Partition::single(4), Partition::single(4));
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.value, 1.0);
  // One trivial side against a non-trivial one carries no information.
  EXPECT_NEAR(metrics::nmi(Partition::single(4), Partition({0, 0, 1, 1})), 0.0, 1e-15);
  EXPECT_QA_ERROR(metrics::nmi(Partition::single(3), Partition::single(4)), ErrorCode::InvalidArgument);
}

TEST(RelativeReduction, DefinitionAndZeroBaseline) {
  EXPECT_DOUBLE_EQ(metrics::relative_reduction(0.4, 0.3), 0.25);
  EXPECT_DOUBLE_EQ(metrics::relative_reduction(0.4, 0.5), -0.25);
  EXPECT_QA_ERROR(metrics::relative_reduction(0.0, 0.1), ErrorCode::UndefinedMetric);
}

}  // namespace
}  // namespace qattack
