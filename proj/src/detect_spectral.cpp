// Leading-eigenvector bisection on the generalized modularity matrix
//   B(g)_ij = A_ij - k_i k_j / 2m - delta_ij * sum_{l in g} B_il
// applied implicitly (never materialized).
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>
#include <vector>

#include "qattack/detect.hpp"
#include "qattack/error.hpp"
#include "qattack/rng.hpp"

namespace qattack::detect {

namespace {

struct Split {
  double gain = 0.0;
  std::vector<NodeId> positive, negative;
};

class SubMatrix {
 public:
  SubMatrix(const Graph& g, const std::vector<NodeId>& members, const std::vector<std::uint32_t>& local)
      : size_(members.size()), two_m_(2.0 * static_cast<double>(g.edge_count())) {
    k_.resize(size_);
    row_.resize(size_);
    adj_offsets_.push_back(0);
    double ksum = 0.0;
    for (std::size_t i = 0; i < size_; ++i) {
      k_[i] = static_cast<double>(g.degree(members[i]));
      ksum += k_[i];
      for (NodeId u : g.neighbors(members[i]))
        if (local[u] != kNone) adj_.push_back(local[u]);
      adj_offsets_.push_back(adj_.size());
    }
    // Row sums of B restricted to g: k_i^(g) - k_i K_g / 2m.
    for (std::size_t i = 0; i < size_; ++i)
      row_[i] = static_cast<double>(adj_offsets_[i + 1] - adj_offsets_[i]) - k_[i] * ksum / two_m_;
    // Gershgorin bound for the shift.
    shift_ = 0.0;
    for (std::size_t i = 0; i < size_; ++i) {
      double s = k_[i] * (ksum - k_[i]) / two_m_;
      for (std::size_t e = adj_offsets_[i]; e < adj_offsets_[i + 1]; ++e) {
        const double expect = k_[i] * k_[adj_[e]] / two_m_;
        s += std::abs(1.0 - expect) - expect;
      }
      s += std::abs(-k_[i] * k_[i] / two_m_ - row_[i]);
      shift_ = std::max(shift_, s);
    }
  }

  static constexpr std::uint32_t kNone = 0xffffffffu;

  std::size_t size() const { return size_; }
  double shift() const { return shift_; }

  void multiply(const std::vector<double>& x, std::vector<double>& y) const {
    double kx = 0.0;
    for (std::size_t i = 0; i < size_; ++i) kx += k_[i] * x[i];
    for (std::size_t i = 0; i < size_; ++i) {
      double s = 0.0;
      for (std::size_t e = adj_offsets_[i]; e < adj_offsets_[i + 1]; ++e) s += x[adj_[e]];
      y[i] = s - k_[i] * kx / two_m_ - row_[i] * x[i];
    }
  }

  Eigen::MatrixXd dense() const {
    Eigen::MatrixXd m(size_, size_);
    std::vector<double> e(size_, 0.0), col(size_);
    for (std::size_t j = 0; j < size_; ++j) {
      e[j] = 1.0;
      multiply(e, col);
      e[j] = 0.0;
      for (std::size_t i = 0; i < size_; ++i) m(i, j) = col[i];
    }
    return m;
  }

  double quadratic(const std::vector<double>& x) const {
    std::vector<double> y(size_);
    multiply(x, y);
    double s = 0.0;
    for (std::size_t i = 0; i < size_; ++i) s += x[i] * y[i];
    return s;
  }

 private:
  std::size_t size_;
  double two_m_;
  std::vector<double> k_, row_;
  std::vector<std::size_t> adj_offsets_;
  std::vector<std::uint32_t> adj_;
  double shift_ = 0.0;
};

std::optional<Split> bisect(const Graph& g, const std::vector<NodeId>& members,
                            std::vector<std::uint32_t>& local, const SpectralOptions& opts) {
  if (members.size() < 2) return std::nullopt;
  for (std::size_t i = 0; i < members.size(); ++i) local[members[i]] = static_cast<std::uint32_t>(i);
  SubMatrix b(g, members, local);
  for (NodeId v : members) local[v] = SubMatrix::kNone;

  const std::size_t n = b.size();
  std::vector<double> x(n), y(n);
  // The uniform vector is always an eigenvector with eigenvalue 0 (rows sum
  // to zero) and never splits anything, so iterate in its complement. This
  // removes the slowest competitor when the leading eigenvalue is near 0.
  auto center = [n](std::vector<double>& v) {
    double mean = 0.0;
    for (double a : v) mean += a;
    mean /= static_cast<double>(n);
    for (double& a : v) a -= mean;
  };
  // Fixed start vector; it only needs a component along the leading direction.
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(splitmix64(i + 1) >> 11) * 0x1.0p-53;
  center(x);
  for (double a : x) norm += a * a;
  norm = std::sqrt(norm);
  if (norm == 0.0) return std::nullopt;
  for (auto& v : x) v /= norm;

  bool converged = false;
  double diff = 0.0;
  for (std::uint32_t it = 0; it < opts.max_iterations; ++it) {
    b.multiply(x, y);
    for (std::size_t i = 0; i < n; ++i) y[i] += b.shift() * x[i];
    center(y);
    norm = 0.0;
    for (double a : y) norm += a * a;
    norm = std::sqrt(norm);
    if (norm == 0.0) return std::nullopt;
    diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] /= norm;
      diff = std::max(diff, std::abs(y[i] - x[i]));
    }
    x.swap(y);
    if (diff < opts.tolerance) {
      converged = true;
      break;
    }
  }
  if (!converged && opts.dense_fallback && n <= opts.dense_limit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b.dense());
    if (eig.info() != Eigen::Success) throw Error(ErrorCode::Convergence, "dense eigensolver failed");
    const auto v = eig.eigenvectors().col(static_cast<Eigen::Index>(n - 1));
    for (std::size_t i = 0; i < n; ++i) x[i] = v(static_cast<Eigen::Index>(i));
    converged = true;
  }
  if (!converged) {
    b.multiply(x, y);
    const double lambda = b.quadratic(x);
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) res += (y[i] - lambda * x[i]) * (y[i] - lambda * x[i]);
    throw Error(ErrorCode::Convergence,
                "power iteration did not converge after " + std::to_string(opts.max_iterations) +
                    " iterations (residual " + std::to_string(std::sqrt(res)) + ")");
  }

  const double lambda = b.quadratic(x);
  if (lambda <= opts.tolerance) return std::nullopt;

  Split split;
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = x[i] >= 0.0 ? 1.0 : -1.0;
    (s[i] > 0 ? split.positive : split.negative).push_back(members[i]);
  }
  if (split.positive.empty() || split.negative.empty()) return std::nullopt;
  split.gain = b.quadratic(s) / (2.0 * static_cast<double>(g.edge_count()) * 2.0);
  if (split.gain <= 1e-12) return std::nullopt;
  return split;
}

std::vector<std::vector<NodeId>> components(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<char> seen(n, 0);
  std::vector<std::vector<NodeId>> out;
  for (NodeId s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<NodeId> comp{s};
    seen[s] = 1;
    for (std::size_t i = 0; i < comp.size(); ++i)
      for (NodeId u : g.neighbors(comp[i]))
        if (!seen[u]) {
          seen[u] = 1;
          comp.push_back(u);
        }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

}  // namespace

Partition detect_spectral(const Graph& g, const SpectralOptions& opts) {
  if (!(opts.tolerance > 0.0)) throw Error(ErrorCode::Config, "spectral tolerance must be positive");
  if (opts.max_iterations == 0) throw Error(ErrorCode::Config, "spectral max_iterations must be positive");
  const std::size_t n = g.node_count();
  std::vector<std::vector<NodeId>> done;
  if (g.edge_count() == 0) return Partition::singletons(n);

  std::vector<std::uint32_t> local(n, SubMatrix::kNone);
  auto groups = components(g);

  struct Pending {
    Split split;
    NodeId first;  // smallest member, for deterministic ordering
  };
  auto cmp = [](const Pending& a, const Pending& b) {
    if (a.split.gain != b.split.gain) return a.split.gain < b.split.gain;
    return a.first > b.first;
  };
  std::priority_queue<Pending, std::vector<Pending>, decltype(cmp)> queue(cmp);
  std::size_t splits = 0;
  auto consider = [&](std::vector<NodeId> members) {
    auto split = bisect(g, members, local, opts);
    if (split) {
      NodeId first = members.front();
      queue.push({std::move(*split), first});
    } else {
      done.push_back(std::move(members));
    }
  };
  for (auto& c : groups) consider(std::move(c));
  while (!queue.empty()) {
    if (opts.max_splits != 0 && splits >= opts.max_splits) break;
    Pending top = queue.top();
    queue.pop();
    ++splits;
    consider(std::move(top.split.positive));
    consider(std::move(top.split.negative));
  }
  // Splits refused by the cap stay whole.
  while (!queue.empty()) {
    auto top = queue.top();
    queue.pop();
    auto& s = top.split;
    s.positive.insert(s.positive.end(), s.negative.begin(), s.negative.end());
    done.push_back(std::move(s.positive));
  }

  std::vector<CommunityId> labels(n);
  std::sort(done.begin(), done.end(), [](const auto& a, const auto& b) {
    return *std::min_element(a.begin(), a.end()) < *std::min_element(b.begin(), b.end());
  });
  for (std::size_t c = 0; c < done.size(); ++c)
    for (NodeId v : done[c]) labels[v] = static_cast<CommunityId>(c);
  return Partition(std::move(labels));
}

}  // namespace qattack::detect
