// Greedy agglomerative modularity (Clauset-Newman-Moore bookkeeping).
//
// Merge keys are kept as integers: for communities i, j with l_ij linking
// edges and degree sums d_i, d_j, the modularity change of merging is
// (2m l_ij - d_i d_j) / 2m^2, so the key 2m l_ij - d_i d_j orders merges
// exactly and their running sum locates the best dendrogram cut.
#include <map>
#include <numeric>
#include <vector>

#include "qattack/detect.hpp"

namespace qattack::detect {

namespace {

struct Candidate {
  std::int64_t key = 0;
  NodeId a = 0, b = 0;  // a < b
  bool valid = false;
};

bool better(const Candidate& x, const Candidate& y) {
  if (!y.valid) return x.valid;
  if (!x.valid) return false;
  if (x.key != y.key) return x.key > y.key;
  return std::pair(x.a, x.b) < std::pair(y.a, y.b);
}

NodeId find_root(std::vector<NodeId>& parent, NodeId v) {
  while (parent[v] != v) v = parent[v] = parent[parent[v]];
  return v;
}

}  // namespace

Partition detect_fn(const Graph& g) {
  const std::size_t n = g.node_count();
  const std::int64_t two_m = 2 * static_cast<std::int64_t>(g.edge_count());
  std::vector<std::map<NodeId, std::int64_t>> links(n);
  std::vector<std::int64_t> deg(n);
  for (NodeId v = 0; v < n; ++v) {
    deg[v] = static_cast<std::int64_t>(g.degree(v));
    for (NodeId u : g.neighbors(v)) links[v][u] = 1;
  }
  auto key = [&](NodeId i, NodeId j, std::int64_t l) { return two_m * l - deg[i] * deg[j]; };
  std::vector<Candidate> best(n);
  auto refresh = [&](NodeId i) {
    Candidate c;
    for (auto [j, l] : links[i]) {
      Candidate t{key(i, j, l), std::min(i, j), std::max(i, j), true};
      if (better(t, c)) c = t;
    }
    best[i] = c;
  };
  std::vector<char> alive(n, 1);
  for (NodeId i = 0; i < n; ++i) refresh(i);

  std::vector<std::pair<NodeId, NodeId>> merges;
  std::int64_t running = 0, best_sum = 0;
  std::size_t best_step = 0;
  for (;;) {
    Candidate top;
    for (NodeId i = 0; i < n; ++i)
      if (alive[i] && better(best[i], top)) top = best[i];
    if (!top.valid) break;
    const NodeId keep = top.a, gone = top.b;
    running += top.key;
    merges.emplace_back(keep, gone);
    if (running > best_sum) {
      best_sum = running;
      best_step = merges.size();
    }
    // Fold `gone` into `keep`.
    links[keep].erase(gone);
    for (auto [c, l] : links[gone]) {
      if (c == keep) continue;
      links[keep][c] += l;
      links[c].erase(gone);
      links[c][keep] += l;
    }
    links[gone].clear();
    alive[gone] = 0;
    best[gone] = {};
    deg[keep] += deg[gone];
    refresh(keep);
    for (auto [c, l] : links[keep]) {
      if (best[c].valid && (best[c].a == keep || best[c].b == keep || best[c].a == gone ||
                            best[c].b == gone)) {
        refresh(c);
      } else {
        // Keys of c's other links are unchanged; only the link to keep moved.
        Candidate t{key(c, keep, l), std::min(c, keep), std::max(c, keep), true};
        if (better(t, best[c])) best[c] = t;
      }
    }
  }

  std::vector<NodeId> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t s = 0; s < best_step; ++s) {
    auto [a, b] = merges[s];
    parent[find_root(parent, b)] = find_root(parent, a);
  }
  std::vector<CommunityId> labels(n);
  for (NodeId v = 0; v < n; ++v) labels[v] = find_root(parent, v);
  return Partition(std::move(labels));
}

}  // namespace qattack::detect
