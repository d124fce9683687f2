#pragma once

#include <span>
#include <vector>

#include "mlad/gbter.hpp"
#include "mlad/logprob.hpp"

namespace mlad {

/// Log-probabilities of graphs, nodes and node sets under independent pair
/// Bernoulli edges. Non-edge sums are cached per node, so scoring a graph
/// costs O(|V| + |E|).
class ProbabilityModel {
public:
  explicit ProbabilityModel(const GbterParams& params);

  std::size_t num_nodes() const noexcept { return n_; }

  /// sum over edges of log P(i,j) + sum over non-edges of log(1 - P(i,j)).
  LogProb graph(const LabeledGraph& g) const;
  /// Same product restricted to the pairs incident to i.
  LogProb node(const LabeledGraph& g, NodeIndex i) const;
  /// Half the sum of node log-probabilities over S.
  LogProb subgraph(const LabeledGraph& g, std::span<const NodeIndex> nodes) const;
  /// node(g, i) for every i, as raw doubles.
  std::vector<double> node_scores(const LabeledGraph& g) const;
  /// Graph score of an edge list over the model's universe; node scores are
  /// written to `node_out` (size num_nodes()). Edges are not validated.
  double score_edges(std::span<const Edge> edges, std::span<double> node_out) const;

private:
  void check(const LabeledGraph& g) const;

  std::size_t n_;
  std::vector<double> edge_delta_;        // log P - log(1-P); -inf when P == 0, 0 when P == 1
  std::vector<double> node_base_;         // sum_j log(1-P(i,j)) over pairs with P < 1
  std::vector<std::size_t> node_forced_;  // pairs at i with P == 1
  std::vector<char> forced_;              // P == 1 flag per pair
  double graph_base_ = 0.0;
  std::size_t graph_forced_ = 0;
};

LogProb graph_log_prob(const GbterParams& params, const LabeledGraph& g);
LogProb node_log_prob(const GbterParams& params, const LabeledGraph& g, NodeIndex i);
/// Throws InvalidArgument for nodes outside the universe.
LogProb subgraph_log_prob(const GbterParams& params, const LabeledGraph& g, std::span<const NodeIndex> nodes);

}  // namespace mlad
