#include "mlad/partition.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "mlad/error.hpp"

namespace mlad {

namespace {
constexpr CommunityId kUnassigned = std::numeric_limits<CommunityId>::max();
}

Partition::Partition(std::size_t num_nodes, std::vector<std::vector<NodeIndex>> communities)
    : communities_(std::move(communities)), community_of_(num_nodes, kUnassigned) {
  for (auto& c : communities_) {
    if (c.empty()) throw InvalidArgument("partition contains an empty community");
    std::sort(c.begin(), c.end());
  }
  std::sort(communities_.begin(), communities_.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  for (CommunityId c = 0; c < communities_.size(); ++c) {
    for (NodeIndex i : communities_[c]) {
      if (i >= num_nodes) throw InvalidArgument("partition member " + std::to_string(i) + " outside universe");
      if (community_of_[i] != kUnassigned)
        throw InvalidArgument("node " + std::to_string(i) + " appears in two communities");
      community_of_[i] = c;
    }
  }
  for (std::size_t i = 0; i < num_nodes; ++i)
    if (community_of_[i] == kUnassigned)
      throw InvalidArgument("node " + std::to_string(i) + " is not covered by the partition");
}

Partition Partition::from_assignment(std::span<const std::size_t> assignment) {
  std::map<std::size_t, std::vector<NodeIndex>> groups;
  for (NodeIndex i = 0; i < assignment.size(); ++i) groups[assignment[i]].push_back(i);
  std::vector<std::vector<NodeIndex>> comms;
  comms.reserve(groups.size());
  for (auto& [_, members] : groups) comms.push_back(std::move(members));
  return Partition(assignment.size(), std::move(comms));
}

Partition Partition::singletons(std::size_t num_nodes) {
  std::vector<std::vector<NodeIndex>> comms(num_nodes);
  for (NodeIndex i = 0; i < num_nodes; ++i) comms[i] = {i};
  return Partition(num_nodes, std::move(comms));
}

CommunityId Partition::community_of(NodeIndex i) const {
  if (i >= community_of_.size()) throw InvalidArgument("node " + std::to_string(i) + " missing from partition");
  return community_of_[i];
}

}  // namespace mlad
