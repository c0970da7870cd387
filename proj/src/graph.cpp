#include "qattack/graph.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "qattack/error.hpp"

namespace qattack {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::Config: return "configuration error";
    case ErrorCode::Infeasible: return "infeasible";
    case ErrorCode::Parse: return "parse error";
    case ErrorCode::Io: return "i/o error";
    case ErrorCode::UndefinedMetric: return "undefined metric";
    case ErrorCode::Convergence: return "convergence failure";
    case ErrorCode::Checksum: return "checksum mismatch";
    case ErrorCode::Budget: return "size guard exceeded";
    case ErrorCode::Internal: return "internal error";
  }
  return "unknown";
}

Graph::Graph(std::size_t n, std::span<const Edge> edges) {
  edges_.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u >= n || v >= n)
      throw Error(ErrorCode::InvalidArgument,
                  "edge (" + std::to_string(u) + ", " + std::to_string(v) + ") out of range");
    if (u == v) throw Error(ErrorCode::InvalidArgument, "self-loop at node " + std::to_string(u));
    edges_.push_back(make_edge(u, v));
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  offsets_.assign(n + 1, 0);
  for (auto [u, v] : edges_) {
    ++offsets_[u + 1];
    ++offsets_[v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
  adj_.resize(2 * edges_.size());
  std::vector<std::size_t> pos(offsets_.begin(), offsets_.end() - 1);
  for (auto [u, v] : edges_) {
    adj_[pos[u]++] = v;
    adj_[pos[v]++] = u;
  }
  for (std::size_t i = 0; i < n; ++i)
    std::sort(adj_.begin() + offsets_[i], adj_.begin() + offsets_[i + 1]);
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  if (u >= node_count() || v >= node_count()) return false;
  auto nb = degree(u) <= degree(v) ? neighbors(u) : neighbors(v);
  NodeId other = degree(u) <= degree(v) ? v : u;
  return std::binary_search(nb.begin(), nb.end(), other);
}

static void check_node(const Graph& g, NodeId v) {
  if (v >= g.node_count())
    throw Error(ErrorCode::InvalidArgument, "invalid node id " + std::to_string(v));
}

std::vector<NodeId> neighbors(const Graph& g, NodeId v) {
  check_node(g, v);
  auto nb = g.neighbors(v);
  return {nb.begin(), nb.end()};
}

std::vector<NodeId> non_neighbors(const Graph& g, NodeId v) {
  check_node(g, v);
  std::vector<NodeId> out;
  auto nb = g.neighbors(v);
  auto it = nb.begin();
  for (NodeId u = 0; u < g.node_count(); ++u) {
    while (it != nb.end() && *it < u) ++it;
    if (u == v || (it != nb.end() && *it == u)) continue;
    out.push_back(u);
  }
  return out;
}

std::optional<NodeId> random_non_neighbor(const Graph& g, NodeId v, Rng& rng) {
  const std::size_t n = g.node_count();
  if (g.degree(v) + 1 >= n) return std::nullopt;
  // Rejection is fast on sparse graphs; dense rows fall back to enumeration.
  if (2 * (g.degree(v) + 1) <= n) {
    for (;;) {
      auto u = uniform_index<NodeId>(rng, static_cast<NodeId>(n));
      if (u != v && !g.has_edge(v, u)) return u;
    }
  }
  auto cand = non_neighbors(g, v);
  return cand[uniform_index(rng, cand.size())];
}

LabeledGraph build_graph(std::span<const std::pair<std::string, std::string>> edge_list) {
  LabeledGraph out;
  std::unordered_map<std::string, NodeId> index;
  auto id_of = [&](const std::string& label) {
    auto [it, fresh] = index.emplace(label, static_cast<NodeId>(out.labels.size()));
    if (fresh) out.labels.push_back(label);
    return it->second;
  };
  std::vector<Edge> edges;
  edges.reserve(edge_list.size());
  for (const auto& [a, b] : edge_list) {
    if (a == b) throw Error(ErrorCode::InvalidArgument, "self-loop (" + a + ", " + b + ")");
    NodeId u = id_of(a);
    NodeId v = id_of(b);
    edges.push_back(make_edge(u, v));
  }
  out.graph = Graph(out.labels.size(), edges);
  return out;
}

static std::string gene_str(const RewiringGene& x) {
  return "(" + std::to_string(x.target) + ", -" + std::to_string(x.delete_peer) + ", +" +
         std::to_string(x.add_peer) + ")";
}

std::optional<PlanViolation> find_violation(const Graph& g, std::span<const RewiringGene> plan) {
  const auto n = g.node_count();
  std::set<Edge> deleted, added;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const auto& x = plan[i];
    auto fail = [&](const std::string& why) {
      return PlanViolation{i, "gene " + std::to_string(i) + " " + gene_str(x) + ": " + why};
    };
    if (x.target >= n || x.delete_peer >= n || x.add_peer >= n) return fail("node id out of range");
    if (x.target == x.delete_peer || x.target == x.add_peer || x.delete_peer == x.add_peer)
      return fail("nodes must be distinct");
    if (!g.has_edge(x.target, x.delete_peer)) return fail("edge to delete is not present");
    if (g.has_edge(x.target, x.add_peer)) return fail("edge to add is already present");
    auto del = make_edge(x.target, x.delete_peer);
    auto add = make_edge(x.target, x.add_peer);
    if (!deleted.insert(del).second) return fail("edge deleted twice");
    if (!added.insert(add).second) return fail("edge added twice");
  }
  return std::nullopt;
}

void validate_plan(const Graph& g, std::span<const RewiringGene> plan) {
  if (auto v = find_violation(g, plan)) throw InfeasiblePlanError(v->gene, v->reason);
}

Graph apply_plan(const Graph& g, std::span<const RewiringGene> plan) {
  validate_plan(g, plan);
  if (plan.empty()) return g;
  std::vector<Edge> del, add;
  for (const auto& x : plan) {
    del.push_back(make_edge(x.target, x.delete_peer));
    add.push_back(make_edge(x.target, x.add_peer));
  }
  std::sort(del.begin(), del.end());
  std::vector<Edge> edges;
  edges.reserve(g.edge_count());
  std::set_difference(g.edges().begin(), g.edges().end(), del.begin(), del.end(),
                      std::back_inserter(edges));
  edges.insert(edges.end(), add.begin(), add.end());
  return Graph(g.node_count(), edges);
}

RewiringPlan reverse_plan(std::span<const RewiringGene> plan) {
  RewiringPlan out;
  out.reserve(plan.size());
  for (const auto& x : plan) out.push_back({x.target, x.add_peer, x.delete_peer});
  return out;
}

}  // namespace qattack
