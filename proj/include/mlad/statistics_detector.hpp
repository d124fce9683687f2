#pragma once

#include <limits>
#include <span>
#include <vector>

#include "mlad/gbter.hpp"
#include "mlad/logprob.hpp"

namespace mlad {

/// Model for one node's (internal, external) degree pair:
/// d_in ~ Binomial(|C|-1, p), d_ex ~ Poisson(eps), independent.
struct NodeDegreeModel {
  std::size_t community_size = 1;
  double density = 0.0;
  double excess = 0.0;
  std::size_t num_nodes = 1;
  bool truncate_poisson = false;

  double log_binomial(std::size_t d_in) const;
  /// Renormalised over d_ex <= num_nodes - 1 when truncating.
  double log_poisson(std::size_t d_ex) const;
  LogProb joint(std::size_t d_in, std::size_t d_ex) const { return LogProb(log_binomial(d_in) + log_poisson(d_ex)); }

  /// Mass of all (d_in', d_ex') no more likely than (d_in, d_ex). External
  /// degrees are enumerated until the Poisson upper tail drops below 1e-12;
  /// that residual tail is counted as anomalous.
  double pvalue(std::size_t d_in, std::size_t d_ex) const;
};

/// Node-level degree statistics detector. Subgraph scores are plain sums of
/// node log-probabilities.
class StatisticsModel {
public:
  StatisticsModel(const GbterParams& params, bool truncate_poisson = false);

  std::size_t num_nodes() const noexcept { return nodes_.size(); }
  const NodeDegreeModel& node_model(NodeIndex i) const { return nodes_.at(i); }
  const Partition& partition() const noexcept { return partition_; }

  LogProb node(const LabeledGraph& g, NodeIndex i) const;
  LogProb subgraph(const LabeledGraph& g, std::span<const NodeIndex> nodes) const;
  std::vector<double> node_scores(const LabeledGraph& g) const;
  double node_pvalue_exact(const LabeledGraph& g, NodeIndex i) const;
  /// Table lookup of node_model(i).joint(d_in, d_ex); -inf outside the support.
  double node_score(NodeIndex i, std::size_t d_in, std::size_t d_ex) const {
    const auto& b = log_binomial_[i];
    const auto& p = log_poisson_[i];
    if (d_in >= b.size() || d_ex >= p.size()) return -std::numeric_limits<double>::infinity();
    return b[d_in] + p[d_ex];
  }

private:
  Partition partition_;
  std::vector<NodeDegreeModel> nodes_;
  std::vector<std::vector<double>> log_binomial_;  // d_in = 0..|C|-1
  std::vector<std::vector<double>> log_poisson_;   // d_ex = 0..|V|-|C|
};

LogProb stats_node_log_prob(const GbterParams& params, const LabeledGraph& g, NodeIndex i,
                            bool truncate_poisson = false);
LogProb stats_subgraph_log_prob(const GbterParams& params, const LabeledGraph& g, std::span<const NodeIndex> nodes,
                                bool truncate_poisson = false);
double stats_node_pvalue_exact(const GbterParams& params, const LabeledGraph& g, NodeIndex i,
                               bool truncate_poisson = false);

}  // namespace mlad
