#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace mlad {

using NodeIndex = std::uint32_t;

/// Unordered node pair, always stored with first < second.
struct Edge {
  NodeIndex first;
  NodeIndex second;

  Edge() = default;
  Edge(NodeIndex a, NodeIndex b) : first(a < b ? a : b), second(a < b ? b : a) {}

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// A fixed, ordered set of node labels. The index of a label is its position
/// in construction order; labels are unique.
class NodeUniverse {
public:
  explicit NodeUniverse(std::vector<std::string> labels);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::string& label(NodeIndex i) const;
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  std::optional<NodeIndex> find(std::string_view label) const;
  /// Throws InvalidArgument when the label is not part of the universe.
  NodeIndex index(std::string_view label) const;

  bool operator==(const NodeUniverse& other) const { return labels_ == other.labels_; }

  /// Universe with labels "0", "1", ..., "n-1".
  static std::shared_ptr<const NodeUniverse> numbered(std::size_t n);

private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeIndex> index_;
};

using UniversePtr = std::shared_ptr<const NodeUniverse>;

/// Undirected simple graph over a shared label universe. Immutable once built.
class LabeledGraph {
public:
  /// Throws InvalidArgument on self-loops, duplicate edges or out-of-range endpoints.
  LabeledGraph(UniversePtr universe, std::vector<Edge> edges);
  /// Empty graph over the universe.
  explicit LabeledGraph(UniversePtr universe);

  const UniversePtr& universe() const noexcept { return universe_; }
  std::size_t num_nodes() const noexcept { return neighbors_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  /// Sorted by (first, second).
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  /// Sorted ascending.
  std::span<const NodeIndex> neighbors(NodeIndex i) const;
  bool has_edge(NodeIndex i, NodeIndex j) const;

  bool operator==(const LabeledGraph& other) const;

private:
  UniversePtr universe_;
  std::vector<Edge> edges_;
  std::vector<std::vector<NodeIndex>> neighbors_;
};

class Partition;

/// Number of edges incident to node i.
std::size_t degree(const LabeledGraph& g, NodeIndex i);

struct SplitDegree {
  std::size_t internal = 0;
  std::size_t external = 0;
};

/// Neighbours of i inside / outside i's community.
SplitDegree split_degree(const LabeledGraph& g, NodeIndex i, const Partition& part);

/// Ordered snapshots over one shared universe, with optional per-snapshot keys.
struct GraphSequence {
  UniversePtr universe;
  std::vector<LabeledGraph> snapshots;
  std::vector<std::string> keys;  // empty, or one per snapshot

  std::size_t size() const noexcept { return snapshots.size(); }
  /// Key of snapshot t, falling back to its position.
  std::string key(std::size_t t) const;
  /// Throws InvalidArgument when a snapshot's universe differs or keys are inconsistent.
  void validate() const;
};

/// Symmetric non-negative pair weights over a universe (dense; diagonal zero).
struct WeightedAggregate {
  UniversePtr universe;
  Eigen::MatrixXd weights;

  double weight(NodeIndex i, NodeIndex j) const { return weights(i, j); }
};

/// weight(i,j) = number of snapshots containing (i,j).
WeightedAggregate aggregate_counts(const GraphSequence& seq);

/// weight(i,j) = sum_t gamma^(T-1-t) [edge in snapshot t]; the newest snapshot has multiplier 1.
WeightedAggregate aggregate_exponential(const GraphSequence& seq, double gamma);

/// Generic form of the two aggregates above with explicit per-snapshot multipliers.
WeightedAggregate aggregate_weighted(const GraphSequence& seq, std::span<const double> multipliers);

}  // namespace mlad
