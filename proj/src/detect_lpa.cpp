#include <algorithm>
#include <numeric>
#include <vector>

#include "qattack/detect.hpp"
#include "qattack/error.hpp"
#include "qattack/rng.hpp"

namespace qattack::detect {

namespace {

// Most frequent neighbour labels of v, ascending.
void dominant_labels(const Graph& g, NodeId v, const std::vector<std::uint32_t>& label,
                     std::vector<std::uint32_t>& count, std::vector<std::uint32_t>& touched,
                     std::vector<std::uint32_t>& out) {
  touched.clear();
  out.clear();
  std::uint32_t top = 0;
  for (NodeId u : g.neighbors(v)) {
    const auto l = label[u];
    if (count[l]++ == 0) touched.push_back(l);
    top = std::max(top, count[l]);
  }
  for (auto l : touched) {
    if (count[l] == top) out.push_back(l);
    count[l] = 0;
  }
  std::sort(out.begin(), out.end());
}

}  // namespace

LpaResult detect_lpa(const Graph& g, std::uint64_t seed, const LpaOptions& opts) {
  if (opts.max_sweeps == 0) throw Error(ErrorCode::Config, "lpa max_sweeps must be positive");
  const std::size_t n = g.node_count();
  Rng rng(seed);
  std::vector<std::uint32_t> label(n), order(n), count(n, 0), touched, best;
  std::iota(label.begin(), label.end(), 0);
  std::iota(order.begin(), order.end(), 0);
  LpaResult result;
  bool stable = false;
  while (result.sweeps < opts.max_sweeps) {
    ++result.sweeps;
    std::shuffle(order.begin(), order.end(), rng);
    for (auto v : order) {
      if (g.degree(v) == 0) continue;
      dominant_labels(g, v, label, count, touched, best);
      label[v] = best.size() == 1 ? best[0] : best[uniform_index(rng, best.size())];
    }
    stable = true;
    for (NodeId v = 0; v < n && stable; ++v) {
      if (g.degree(v) == 0) continue;
      dominant_labels(g, v, label, count, touched, best);
      stable = std::binary_search(best.begin(), best.end(), label[v]);
    }
    if (stable) break;
  }
  result.hit_sweep_cap = !stable;
  result.partition = Partition(std::vector<CommunityId>(label.begin(), label.end()));
  return result;
}

}  // namespace qattack::detect
