#include "qattack/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <vector>

#include "qattack/error.hpp"

namespace qattack::metrics {

namespace {

void require_edges(const Graph& g) {
  if (g.edge_count() == 0) throw Error(ErrorCode::UndefinedMetric, "modularity undefined for m = 0");
}

// Sorting before summing keeps results independent of label order.
double stable_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

}  // namespace

double modularity(const Graph& g, const Partition& p) {
  require_edges(g);
  if (p.size() != g.node_count())
    throw Error(ErrorCode::InvalidArgument, "partition size does not match graph");
  const auto h = p.community_count();
  std::vector<double> intra(h, 0.0), ends(h, 0.0);
  for (auto [u, v] : g.edges())
    if (p[u] == p[v]) intra[p[u]] += 1.0;
  for (NodeId v = 0; v < g.node_count(); ++v) ends[p[v]] += static_cast<double>(g.degree(v));
  const double m = static_cast<double>(g.edge_count());
  double q = 0.0;
  for (std::size_t c = 0; c < h; ++c) {
    const double a = ends[c] / (2.0 * m);
    q += intra[c] / m - a * a;
  }
  return q;
}

double modularity_matrix(const Graph& g, std::span<const int> s) {
  require_edges(g);
  if (s.size() != g.node_count())
    throw Error(ErrorCode::InvalidArgument, "sign vector size does not match graph");
  for (int x : s)
    if (x != 1 && x != -1) throw Error(ErrorCode::InvalidArgument, "sign vector entries must be +1 or -1");
  // s^T A s = 2 sum_edges s_u s_v ; s^T k k^T s / 2m = (k.s)^2 / 2m
  const double m = static_cast<double>(g.edge_count());
  double sas = 0.0;
  for (auto [u, v] : g.edges()) sas += 2.0 * s[u] * s[v];
  double ks = 0.0;
  for (NodeId v = 0; v < g.node_count(); ++v) ks += static_cast<double>(g.degree(v)) * s[v];
  return (sas - ks * ks / (2.0 * m)) / (4.0 * m);
}

NmiResult nmi_checked(const Partition& x, const Partition& y) {
  if (x.size() != y.size()) throw Error(ErrorCode::InvalidArgument, "partitions cover different node sets");
  const std::size_t n = x.size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "empty partitions");
  const double dn = static_cast<double>(n);
  std::vector<double> px(x.community_count(), 0.0), py(y.community_count(), 0.0);
  std::unordered_map<std::uint64_t, double> joint;
  for (std::size_t v = 0; v < n; ++v) {
    px[x[v]] += 1.0;
    py[y[v]] += 1.0;
    joint[static_cast<std::uint64_t>(x[v]) * y.community_count() + y[v]] += 1.0;
  }
  auto entropy = [&](const std::vector<double>& counts) {
    std::vector<double> t;
    for (double c : counts)
      if (c > 0) t.push_back(-(c / dn) * std::log(c / dn));
    return stable_sum(t);
  };
  const double hx = entropy(px);
  const double hy = entropy(py);
  if (hx + hy == 0.0) return {1.0, true};
  std::vector<double> t;
  for (auto [key, c] : joint) {
    const double a = px[key / y.community_count()];
    const double b = py[key % y.community_count()];
    t.push_back((c / dn) * std::log(c * dn / (a * b)));
  }
  const double mi = stable_sum(t);
  // Equal normalized labels mean identical partitions; avoid rounding below 1.
  if (x == y) return {1.0, false};
  double v = 2.0 * mi / (hx + hy);
  return {std::clamp(v, 0.0, 1.0), false};
}

double relative_reduction(double before, double after) {
  if (before == 0.0) throw Error(ErrorCode::UndefinedMetric, "relative reduction undefined for before = 0");
  return (before - after) / before;
}

}  // namespace qattack::metrics
