// Louvain: best-gain local moving followed by aggregation, until no node moves.
// Gains are compared as the integer 2m*k_i,in - tot_c*k_i.
#include <algorithm>
#include <numeric>
#include <vector>

#include "qattack/detect.hpp"
#include "qattack/rng.hpp"

namespace qattack::detect {

namespace {

struct Level {
  std::size_t n = 0;
  std::vector<std::size_t> offsets;
  std::vector<std::uint32_t> nbr;
  std::vector<std::int64_t> weight;
  std::vector<std::int64_t> strength;  // includes twice the self-loop weight
};

Level from_graph(const Graph& g) {
  Level lv;
  lv.n = g.node_count();
  lv.offsets.push_back(0);
  for (NodeId v = 0; v < lv.n; ++v) {
    for (NodeId u : g.neighbors(v)) {
      lv.nbr.push_back(u);
      lv.weight.push_back(1);
    }
    lv.offsets.push_back(lv.nbr.size());
    lv.strength.push_back(static_cast<std::int64_t>(g.degree(v)));
  }
  return lv;
}

constexpr std::uint32_t kMaxPasses = 1000;

// Returns true when any node changed community.
bool local_moving(const Level& lv, std::int64_t two_m, std::vector<std::uint32_t>& comm, Rng& rng) {
  std::vector<std::int64_t> tot(lv.strength);
  std::vector<std::int64_t> wto(lv.n, 0);
  std::vector<std::uint32_t> touched;
  std::vector<std::uint32_t> order(lv.n);
  std::iota(order.begin(), order.end(), 0);
  bool any = false;
  for (std::uint32_t pass = 0; pass < kMaxPasses; ++pass) {
    std::shuffle(order.begin(), order.end(), rng);
    bool moved = false;
    for (auto i : order) {
      const std::uint32_t own = comm[i];
      touched.clear();
      touched.push_back(own);
      wto[own] = 0;
      for (std::size_t e = lv.offsets[i]; e < lv.offsets[i + 1]; ++e) {
        const auto j = lv.nbr[e];
        if (j == i) continue;
        const auto c = comm[j];
        if (wto[c] == 0 && c != own) touched.push_back(c);
        wto[c] += lv.weight[e];
      }
      const std::int64_t k = lv.strength[i];
      tot[own] -= k;
      std::uint32_t best = own;
      std::int64_t best_gain = two_m * wto[own] - tot[own] * k;
      for (std::size_t t = 1; t < touched.size(); ++t) {
        const auto c = touched[t];
        const std::int64_t gain = two_m * wto[c] - tot[c] * k;
        if (gain > best_gain || (gain == best_gain && best != own && c < best)) {
          best_gain = gain;
          best = c;
        }
      }
      tot[best] += k;
      comm[i] = best;
      if (best != own) moved = true;
      for (auto c : touched) wto[c] = 0;
    }
    if (!moved) break;
    any = true;
  }
  return any;
}

Level aggregate(const Level& lv, const std::vector<std::uint32_t>& comm, std::size_t count) {
  Level out;
  out.n = count;
  out.strength.assign(count, 0);
  std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> rows(count);
  for (std::uint32_t i = 0; i < lv.n; ++i) {
    out.strength[comm[i]] += lv.strength[i];
    for (std::size_t e = lv.offsets[i]; e < lv.offsets[i + 1]; ++e)
      rows[comm[i]].emplace_back(comm[lv.nbr[e]], lv.weight[e]);
  }
  out.offsets.push_back(0);
  for (auto& row : rows) {
    std::sort(row.begin(), row.end());
    for (std::size_t a = 0; a < row.size();) {
      std::size_t b = a;
      std::int64_t w = 0;
      while (b < row.size() && row[b].first == row[a].first) w += row[b++].second;
      out.nbr.push_back(row[a].first);
      out.weight.push_back(w);
      a = b;
    }
    out.offsets.push_back(out.nbr.size());
  }
  return out;
}

}  // namespace

Partition detect_louvain(const Graph& g, std::uint64_t seed) {
  const std::size_t n = g.node_count();
  if (g.edge_count() == 0) return Partition::singletons(n);
  const std::int64_t two_m = 2 * static_cast<std::int64_t>(g.edge_count());
  Rng rng(seed);
  Level lv = from_graph(g);
  std::vector<std::uint32_t> assignment(n);
  std::iota(assignment.begin(), assignment.end(), 0);
  for (;;) {
    std::vector<std::uint32_t> comm(lv.n);
    std::iota(comm.begin(), comm.end(), 0);
    if (!local_moving(lv, two_m, comm, rng)) break;
    // Renumber densely by first occurrence.
    std::vector<std::uint32_t> remap(lv.n, 0xffffffffu);
    std::uint32_t count = 0;
    for (auto& c : comm) {
      if (remap[c] == 0xffffffffu) remap[c] = count++;
      c = remap[c];
    }
    for (auto& a : assignment) a = comm[a];
    if (count == lv.n) break;
    lv = aggregate(lv, comm, count);
  }
  return Partition(std::vector<CommunityId>(assignment.begin(), assignment.end()));
}

}  // namespace qattack::detect
