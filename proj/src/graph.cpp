#include "mlad/graph.hpp"

#include <algorithm>
#include <cmath>

#include "mlad/error.hpp"
#include "mlad/partition.hpp"

namespace mlad {

NodeUniverse::NodeUniverse(std::vector<std::string> labels) : labels_(std::move(labels)) {
  index_.reserve(labels_.size());
  for (NodeIndex i = 0; i < labels_.size(); ++i) {
    if (labels_[i].empty()) throw InvalidArgument("empty node label");
    if (!index_.emplace(labels_[i], i).second)
      throw InvalidArgument("duplicate node label '" + labels_[i] + "'");
  }
}

const std::string& NodeUniverse::label(NodeIndex i) const {
  if (i >= labels_.size()) throw InvalidArgument("node index " + std::to_string(i) + " out of range");
  return labels_[i];
}

std::optional<NodeIndex> NodeUniverse::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeIndex NodeUniverse::index(std::string_view label) const {
  if (auto i = find(label)) return *i;
  throw InvalidArgument("unknown node label '" + std::string(label) + "'");
}

std::shared_ptr<const NodeUniverse> NodeUniverse::numbered(std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return std::make_shared<const NodeUniverse>(std::move(labels));
}

LabeledGraph::LabeledGraph(UniversePtr universe) : LabeledGraph(std::move(universe), {}) {}

LabeledGraph::LabeledGraph(UniversePtr universe, std::vector<Edge> edges)
    : universe_(std::move(universe)), edges_(std::move(edges)) {
  if (!universe_) throw InvalidArgument("graph requires a node universe");
  const auto n = universe_->size();
  neighbors_.resize(n);
  std::sort(edges_.begin(), edges_.end());
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const auto& e = edges_[k];
    if (e.first == e.second) throw InvalidArgument("self-loop on node " + universe_->label(e.first));
    if (e.second >= n) throw InvalidArgument("edge endpoint " + std::to_string(e.second) + " outside universe");
    if (k > 0 && edges_[k - 1] == e)
      throw InvalidArgument("duplicate edge " + universe_->label(e.first) + " " + universe_->label(e.second));
    neighbors_[e.first].push_back(e.second);
    neighbors_[e.second].push_back(e.first);
  }
  for (auto& nb : neighbors_) std::sort(nb.begin(), nb.end());
}

std::span<const NodeIndex> LabeledGraph::neighbors(NodeIndex i) const {
  if (i >= neighbors_.size()) throw InvalidArgument("node index " + std::to_string(i) + " out of range");
  return neighbors_[i];
}

bool LabeledGraph::has_edge(NodeIndex i, NodeIndex j) const {
  const auto nb = neighbors(i);
  return std::binary_search(nb.begin(), nb.end(), j);
}

bool LabeledGraph::operator==(const LabeledGraph& other) const {
  return *universe_ == *other.universe_ && edges_ == other.edges_;
}

std::size_t degree(const LabeledGraph& g, NodeIndex i) { return g.neighbors(i).size(); }

SplitDegree split_degree(const LabeledGraph& g, NodeIndex i, const Partition& part) {
  if (part.num_nodes() != g.num_nodes()) throw InvalidArgument("partition does not cover the graph universe");
  const CommunityId c = part.community_of(i);
  SplitDegree d;
  for (NodeIndex j : g.neighbors(i)) {
    if (part.community_of(j) == c)
      ++d.internal;
    else
      ++d.external;
  }
  return d;
}

std::string GraphSequence::key(std::size_t t) const {
  if (t < keys.size()) return keys[t];
  return std::to_string(t);
}

void GraphSequence::validate() const {
  if (!universe) throw InvalidArgument("sequence has no universe");
  if (!keys.empty() && keys.size() != snapshots.size())
    throw InvalidArgument("sequence keys do not match snapshot count");
  for (std::size_t t = 0; t < snapshots.size(); ++t)
    if (!(*snapshots[t].universe() == *universe))
      throw InvalidArgument("snapshot " + key(t) + " is over a different universe");
}

WeightedAggregate aggregate_weighted(const GraphSequence& seq, std::span<const double> multipliers) {
  if (seq.snapshots.empty()) throw InvalidArgument("cannot aggregate an empty sequence");
  if (multipliers.size() != seq.snapshots.size()) throw InvalidArgument("one multiplier per snapshot required");
  seq.validate();
  const auto n = static_cast<Eigen::Index>(seq.universe->size());
  WeightedAggregate agg{seq.universe, Eigen::MatrixXd::Zero(n, n)};
  for (std::size_t t = 0; t < seq.snapshots.size(); ++t) {
    const double w = multipliers[t];
    if (w == 0.0) continue;
    for (const auto& e : seq.snapshots[t].edges()) {
      agg.weights(e.first, e.second) += w;
      agg.weights(e.second, e.first) += w;
    }
  }
  return agg;
}

WeightedAggregate aggregate_counts(const GraphSequence& seq) {
  const std::vector<double> ones(seq.snapshots.size(), 1.0);
  return aggregate_weighted(seq, ones);
}

WeightedAggregate aggregate_exponential(const GraphSequence& seq, double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw InvalidArgument("exponential weighting requires gamma in [0,1)");
  const std::size_t T = seq.snapshots.size();
  std::vector<double> mult(T, 0.0);
  double w = 1.0;
  for (std::size_t k = 0; k < T; ++k) {
    mult[T - 1 - k] = w;
    w *= gamma;
  }
  return aggregate_weighted(seq, mult);
}

}  // namespace mlad
