#pragma once

#include <cstddef>
#include <vector>

#include "mlad/graph.hpp"

namespace mlad {

using CommunityId = std::uint32_t;

/// Disjoint cover of the node universe by communities.
///
/// Communities are stored in canonical order: members sorted ascending and
/// communities ordered by their smallest member, so community ids are stable
/// for equal partitions regardless of how they were produced.
class Partition {
public:
  Partition() = default;
  /// Throws InvalidArgument unless the communities are non-empty, disjoint and
  /// cover 0..num_nodes-1.
  Partition(std::size_t num_nodes, std::vector<std::vector<NodeIndex>> communities);

  /// Builds a partition from a node -> label assignment (labels need not be dense).
  static Partition from_assignment(std::span<const std::size_t> assignment);
  static Partition singletons(std::size_t num_nodes);

  std::size_t num_nodes() const noexcept { return community_of_.size(); }
  std::size_t num_communities() const noexcept { return communities_.size(); }
  const std::vector<std::vector<NodeIndex>>& communities() const noexcept { return communities_; }
  const std::vector<NodeIndex>& members(CommunityId c) const { return communities_.at(c); }
  std::size_t community_size(CommunityId c) const { return communities_.at(c).size(); }
  /// Throws InvalidArgument for nodes outside the partition.
  CommunityId community_of(NodeIndex i) const;

  bool operator==(const Partition& other) const { return communities_ == other.communities_; }

private:
  std::vector<std::vector<NodeIndex>> communities_;
  std::vector<CommunityId> community_of_;
};

}  // namespace mlad
