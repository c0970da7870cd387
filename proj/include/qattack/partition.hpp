#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qattack/graph.hpp"

namespace qattack {

using CommunityId = std::uint32_t;

// Community label per node, normalized to 0..h-1 by first occurrence.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<CommunityId> raw);

  static Partition singletons(std::size_t n);
  static Partition single(std::size_t n);

  std::size_t size() const { return labels_.size(); }
  std::size_t community_count() const { return h_; }
  CommunityId operator[](NodeId v) const { return labels_[v]; }
  const std::vector<CommunityId>& labels() const { return labels_; }
  std::vector<std::vector<NodeId>> communities() const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<CommunityId> labels_;
  std::size_t h_ = 0;
};

}  // namespace qattack
