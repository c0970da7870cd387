#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qattack/rng.hpp"

namespace qattack {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;  // always stored with first < second

inline Edge make_edge(NodeId a, NodeId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

// Immutable undirected simple graph on dense ids 0..n-1.
class Graph {
 public:
  Graph() = default;
  // Duplicates collapse; self-loops and out-of-range ids throw.
  Graph(std::size_t n, std::span<const Edge> edges);

  std::size_t node_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  std::span<const NodeId> neighbors(NodeId v) const {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  bool has_edge(NodeId u, NodeId v) const;
  const std::vector<Edge>& edges() const { return edges_; }  // sorted

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.node_count() == b.node_count() && a.edges_ == b.edges_;
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> adj_;
  std::vector<Edge> edges_;
};

// Node-id checked accessors.
std::vector<NodeId> neighbors(const Graph& g, NodeId v);
std::vector<NodeId> non_neighbors(const Graph& g, NodeId v);

// Uniform draw by rejection; nullopt when v is adjacent to everything.
std::optional<NodeId> random_non_neighbor(const Graph& g, NodeId v, Rng& rng);

struct LabeledGraph {
  Graph graph;
  std::vector<std::string> labels;  // id -> original label
};

// Labels get ids in order of first appearance.
LabeledGraph build_graph(std::span<const std::pair<std::string, std::string>> edge_list);

struct RewiringGene {
  NodeId target = 0;
  NodeId delete_peer = 0;
  NodeId add_peer = 0;
  friend auto operator<=>(const RewiringGene&, const RewiringGene&) = default;
};

using RewiringPlan = std::vector<RewiringGene>;

struct PlanViolation {
  std::size_t gene;
  std::string reason;
};

// Set-semantics check against the base graph.
std::optional<PlanViolation> find_violation(const Graph& g, std::span<const RewiringGene> plan);
void validate_plan(const Graph& g, std::span<const RewiringGene> plan);  // throws InfeasiblePlanError
Graph apply_plan(const Graph& g, std::span<const RewiringGene> plan);
RewiringPlan reverse_plan(std::span<const RewiringGene> plan);

}  // namespace qattack
