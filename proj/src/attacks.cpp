#include "qattack/attacks.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "qattack/error.hpp"
#include "qattack/metrics.hpp"
#include "qattack/rng.hpp"

namespace qattack::attacks {

namespace {

// Mutable adjacency so each draw sees the rewirings already made.
class WorkingCopy {
 public:
  explicit WorkingCopy(const Graph& g) : adj_(g.node_count()) {
    for (NodeId v = 0; v < g.node_count(); ++v) adj_[v].assign(g.neighbors(v).begin(), g.neighbors(v).end());
  }
  bool has(NodeId u, NodeId v) const { return std::binary_search(adj_[u].begin(), adj_[u].end(), v); }
  const std::vector<NodeId>& neighbors(NodeId v) const { return adj_[v]; }
  void rewire(const RewiringGene& x) {
    erase(x.target, x.delete_peer);
    erase(x.delete_peer, x.target);
    insert(x.target, x.add_peer);
    insert(x.add_peer, x.target);
  }

 private:
  void erase(NodeId u, NodeId v) { adj_[u].erase(std::lower_bound(adj_[u].begin(), adj_[u].end(), v)); }
  void insert(NodeId u, NodeId v) { adj_[u].insert(std::lower_bound(adj_[u].begin(), adj_[u].end(), v), v); }
  std::vector<std::vector<NodeId>> adj_;
};

void check_config(const Graph& g, const HeuristicConfig& cfg) {
  if (cfg.target_count < 1 || cfg.target_count > g.node_count())
    throw Error(ErrorCode::Config, "K must be in 1.." + std::to_string(g.node_count()) + ", got " +
                                       std::to_string(cfg.target_count));
}

std::vector<NodeId> sample_targets(const Graph& g, std::uint32_t k, Rng& rng) {
  std::vector<NodeId> all(g.node_count()), out;
  std::iota(all.begin(), all.end(), 0);
  std::sample(all.begin(), all.end(), std::back_inserter(out), k, rng);
  return out;
}

// Shared attack loop. `community` is null for RA; otherwise deletions stay
// inside the target's community and additions leave it.
AttackOutcome run_loop(const Graph& g, const HeuristicConfig& cfg, std::vector<NodeId> targets,
                       const Partition* community, Rng& rng) {
  AttackOutcome out;
  out.targets = std::move(targets);
  WorkingCopy work(g);
  std::vector<NodeId> s1, s2;
  std::uint32_t failures = 0;
  while (out.plan.size() < cfg.budget) {
    if (failures >= kRetryCap) {
      out.warnings.push_back("stopped after " + std::to_string(kRetryCap) + " failed draws with " +
                             std::to_string(out.plan.size()) + " of " + std::to_string(cfg.budget) +
                             " rewirings");
      break;
    }
    const NodeId v = out.targets[uniform_index(rng, out.targets.size())];
    s1.clear();
    s2.clear();
    for (NodeId u : work.neighbors(v))
      if (!community || (*community)[u] == (*community)[v]) s1.push_back(u);
    for (NodeId u = 0; u < g.node_count(); ++u)
      if (u != v && !work.has(v, u) && (!community || (*community)[u] != (*community)[v])) s2.push_back(u);
    if (s1.empty() || s2.empty()) {
      ++failures;
      continue;
    }
    RewiringGene x{v, s1[uniform_index(rng, s1.size())], s2[uniform_index(rng, s2.size())]};
    // The plan must stay a valid set of deletions from / additions to the base graph.
    if (!g.has_edge(x.target, x.delete_peer) || g.has_edge(x.target, x.add_peer)) {
      ++failures;
      continue;
    }
    work.rewire(x);
    out.plan.push_back(x);
  }
  return out;
}

}  // namespace

std::uint64_t detection_seed(const HeuristicConfig& cfg) { return derive_seed(cfg.seed, {seed_tag::kDetect}); }

AttackOutcome random_attack(const Graph& g, const HeuristicConfig& cfg) {
  check_config(g, cfg);
  Rng rng(derive_seed(cfg.seed, {seed_tag::kAttack}));
  auto targets = sample_targets(g, cfg.target_count, rng);
  return run_loop(g, cfg, std::move(targets), nullptr, rng);
}

AttackOutcome cda_attack(const Graph& g, const HeuristicConfig& cfg, const Partition& detected) {
  check_config(g, cfg);
  if (detected.size() != g.node_count()) throw Error(ErrorCode::InvalidArgument, "partition size mismatch");
  Rng rng(derive_seed(cfg.seed, {seed_tag::kAttack}));
  auto targets = sample_targets(g, cfg.target_count, rng);
  return run_loop(g, cfg, std::move(targets), &detected, rng);
}

AttackOutcome cda_attack(const Graph& g, const HeuristicConfig& cfg, const detect::Detector& detector) {
  return cda_attack(g, cfg, detector.run(g, detection_seed(cfg)));
}

std::vector<NodeId> dba_targets(const Graph& g, const Partition& detected, std::uint32_t k) {
  const std::size_t n = g.node_count();
  if (k < 1 || k > n) throw Error(ErrorCode::Config, "K must be in 1.." + std::to_string(n));
  if (detected.size() != n) throw Error(ErrorCode::InvalidArgument, "partition size mismatch");
  std::vector<char> chosen(n, 0), pool(n, 0);
  std::vector<NodeId> out;
  std::size_t pool_size = 0;
  while (out.size() < k) {
    if (pool_size == 0) {  // new turn
      for (NodeId v = 0; v < n; ++v) pool[v] = !chosen[v];
      pool_size = n - out.size();
    }
    NodeId best = 0;
    bool found = false;
    for (NodeId v = 0; v < n; ++v)
      if (pool[v] && (!found || g.degree(v) > g.degree(best))) {
        best = v;
        found = true;
      }
    out.push_back(best);
    chosen[best] = 1;
    for (NodeId v = 0; v < n; ++v)
      if (pool[v] && detected[v] == detected[best]) {
        pool[v] = 0;
        --pool_size;
      }
  }
  return out;
}

AttackOutcome dba_attack(const Graph& g, const HeuristicConfig& cfg, const Partition& detected) {
  check_config(g, cfg);
  auto targets = dba_targets(g, detected, cfg.target_count);
  Rng rng(derive_seed(cfg.seed, {seed_tag::kAttack}));
  return run_loop(g, cfg, std::move(targets), &detected, rng);
}

AttackOutcome dba_attack(const Graph& g, const HeuristicConfig& cfg, const detect::Detector& detector) {
  return dba_attack(g, cfg, detector.run(g, detection_seed(cfg)));
}

std::size_t feasible_gene_count(const Graph& g) {
  const std::size_t n = g.node_count();
  std::size_t total = 0;
  for (NodeId v = 0; v < n; ++v) total += g.degree(v) * (n - 1 - g.degree(v));
  return total;
}

ExhaustiveResult exhaustive_best_rewiring(const Graph& g, const detect::Detector& detector, std::uint64_t seed,
                                          std::size_t max_genes) {
  const std::size_t count = feasible_gene_count(g);
  if (count > max_genes)
    throw Error(ErrorCode::Budget, "exhaustive search needs " + std::to_string(count) +
                                       " detector runs, above the limit of " + std::to_string(max_genes));
  if (count == 0) throw Error(ErrorCode::Infeasible, "graph admits no rewiring");
  ExhaustiveResult best;
  best.q_after = std::numeric_limits<double>::infinity();
  const std::size_t n = g.node_count();
  for (NodeId t = 0; t < n; ++t) {
    if (g.degree(t) == 0 || g.degree(t) + 1 == n) continue;
    auto non = non_neighbors(g, t);
    for (NodeId d : g.neighbors(t))
      for (NodeId a : non) {
        const RewiringGene x{t, d, a};
        const Graph h = apply_plan(g, std::span(&x, 1));
        const double q = metrics::modularity(h, detector.run(h, seed));
        ++best.evaluated;
        if (q < best.q_after) {
          best.q_after = q;
          best.gene = x;
        }
      }
  }
  return best;
}

}  // namespace qattack::attacks
