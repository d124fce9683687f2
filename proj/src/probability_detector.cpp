#include "mlad/probability_detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mlad {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

ProbabilityModel::ProbabilityModel(const GbterParams& params)
    : n_(params.num_nodes()),
      edge_delta_(n_ * n_, 0.0),
      node_base_(n_, 0.0),
      node_forced_(n_, 0),
      forced_(n_ * n_, 0) {
  const EdgeProbabilityTable table(params);
  for (NodeIndex i = 0; i < n_; ++i) {
    for (NodeIndex j = i + 1; j < n_; ++j) {
      const double p = table(i, j);
      double delta = 0.0;
      if (p >= 1.0) {
        forced_[i * n_ + j] = forced_[j * n_ + i] = 1;
        ++node_forced_[i];
        ++node_forced_[j];
        ++graph_forced_;
      } else {
        const double log_q = std::log1p(-p);
        node_base_[i] += log_q;
        node_base_[j] += log_q;
        graph_base_ += log_q;
        delta = p <= 0.0 ? kNegInf : std::log(p) - log_q;
      }
      edge_delta_[i * n_ + j] = edge_delta_[j * n_ + i] = delta;
    }
  }
}

void ProbabilityModel::check(const LabeledGraph& g) const {
  if (g.num_nodes() != n_) throw InvalidArgument("graph universe does not match model");
}

LogProb ProbabilityModel::graph(const LabeledGraph& g) const {
  check(g);
  double s = graph_base_;
  std::size_t forced_present = 0;
  for (const auto& e : g.edges()) {
    const std::size_t k = e.first * n_ + e.second;
    if (forced_[k]) ++forced_present;
    s += edge_delta_[k];
  }
  if (forced_present < graph_forced_) return LogProb::impossible();
  return LogProb(s);
}

LogProb ProbabilityModel::node(const LabeledGraph& g, NodeIndex i) const {
  check(g);
  const auto nb = g.neighbors(i);
  double s = node_base_[i];
  std::size_t forced_present = 0;
  for (NodeIndex j : nb) {
    const std::size_t k = static_cast<std::size_t>(i) * n_ + j;
    if (forced_[k]) ++forced_present;
    s += edge_delta_[k];
  }
  if (forced_present < node_forced_[i]) return LogProb::impossible();
  return LogProb(s);
}

std::vector<double> ProbabilityModel::node_scores(const LabeledGraph& g) const {
  std::vector<double> out(n_);
  for (NodeIndex i = 0; i < n_; ++i) out[i] = node(g, i).value();
  return out;
}

double ProbabilityModel::score_edges(std::span<const Edge> edges, std::span<double> node_out) const {
  if (node_out.size() != n_) throw InvalidArgument("node score buffer has the wrong size");
  std::copy(node_base_.begin(), node_base_.end(), node_out.begin());
  double s = graph_base_;
  std::size_t forced_present = 0;
  std::vector<std::size_t> node_forced_present;
  if (graph_forced_ > 0) node_forced_present.assign(n_, 0);
  for (const auto& e : edges) {
    const std::size_t k = e.first * n_ + e.second;
    const double d = edge_delta_[k];
    s += d;
    node_out[e.first] += d;
    node_out[e.second] += d;
    if (forced_[k]) {
      ++forced_present;
      ++node_forced_present[e.first];
      ++node_forced_present[e.second];
    }
  }
  if (graph_forced_ > 0) {
    for (NodeIndex i = 0; i < n_; ++i)
      if (node_forced_present[i] < node_forced_[i]) node_out[i] = kNegInf;
    if (forced_present < graph_forced_) return kNegInf;
  }
  return s;
}

LogProb ProbabilityModel::subgraph(const LabeledGraph& g, std::span<const NodeIndex> nodes) const {
  check(g);
  double s = 0.0;
  for (NodeIndex i : nodes) {
    if (i >= n_) throw InvalidArgument("node " + std::to_string(i) + " outside universe");
    s += node(g, i).value();
  }
  return LogProb(0.5 * s);
}

LogProb graph_log_prob(const GbterParams& params, const LabeledGraph& g) { return ProbabilityModel(params).graph(g); }

LogProb node_log_prob(const GbterParams& params, const LabeledGraph& g, NodeIndex i) {
  return ProbabilityModel(params).node(g, i);
}

LogProb subgraph_log_prob(const GbterParams& params, const LabeledGraph& g, std::span<const NodeIndex> nodes) {
  return ProbabilityModel(params).subgraph(g, nodes);
}

}  // namespace mlad
