#include "qattack/partition.hpp"

#include <limits>

namespace qattack {

Partition::Partition(std::vector<CommunityId> raw) : labels_(std::move(raw)) {
  constexpr auto kUnset = std::numeric_limits<CommunityId>::max();
  std::vector<CommunityId> remap;
  for (auto& l : labels_) {
    if (l >= remap.size()) remap.resize(static_cast<std::size_t>(l) + 1, kUnset);
    if (remap[l] == kUnset) remap[l] = static_cast<CommunityId>(h_++);
    l = remap[l];
  }
}

Partition Partition::singletons(std::size_t n) {
  std::vector<CommunityId> l(n);
  for (std::size_t i = 0; i < n; ++i) l[i] = static_cast<CommunityId>(i);
  return Partition(std::move(l));
}

Partition Partition::single(std::size_t n) { return Partition(std::vector<CommunityId>(n, 0)); }

std::vector<std::vector<NodeId>> Partition::communities() const {
  std::vector<std::vector<NodeId>> out(h_);
  for (std::size_t v = 0; v < labels_.size(); ++v) out[labels_[v]].push_back(static_cast<NodeId>(v));
  return out;
}

}  // namespace qattack
