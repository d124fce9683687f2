#include "mlad/statistics_detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mlad/graph.hpp"

namespace mlad {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kTailCutoff = 1e-12;

// k log x with 0 log 0 = 0.
double xlogy(double k, double x) {
  if (k == 0.0) return 0.0;
  if (x <= 0.0) return kNegInf;
  return k * std::log(x);
}

double log_poisson_pmf(double eps, std::size_t d) {
  if (eps <= 0.0) return d == 0 ? 0.0 : kNegInf;
  const double k = static_cast<double>(d);
  return -eps + k * std::log(eps) - std::lgamma(k + 1.0);
}

}  // namespace

double NodeDegreeModel::log_binomial(std::size_t d_in) const {
  const std::size_t m = community_size - 1;
  if (d_in > m) return kNegInf;
  const double n = static_cast<double>(m), k = static_cast<double>(d_in);
  const double log_choose = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  return log_choose + xlogy(k, density) + xlogy(n - k, 1.0 - density);
}

double NodeDegreeModel::log_poisson(std::size_t d_ex) const {
  if (!truncate_poisson) return log_poisson_pmf(excess, d_ex);
  const std::size_t cap = num_nodes - 1;
  if (d_ex > cap) return kNegInf;
  if (excess <= 0.0) return log_poisson_pmf(excess, d_ex);
  // log P(X <= cap) by log-sum-exp over the support.
  double mx = kNegInf;
  for (std::size_t k = 0; k <= cap; ++k) mx = std::max(mx, log_poisson_pmf(excess, k));
  double s = 0.0;
  for (std::size_t k = 0; k <= cap; ++k) s += std::exp(log_poisson_pmf(excess, k) - mx);
  return log_poisson_pmf(excess, d_ex) - (mx + std::log(s));
}

double NodeDegreeModel::pvalue(std::size_t d_in, std::size_t d_ex) const {
  const double observed = joint(d_in, d_ex).value();
  const std::size_t m = community_size - 1;

  std::vector<double> ex_log;  // log pmf of external degree over the enumerated range
  double tail = 0.0;
  if (truncate_poisson) {
    for (std::size_t k = 0; k + 1 <= num_nodes; ++k) ex_log.push_back(log_poisson(k));
  } else if (excess <= 0.0) {
    ex_log.push_back(0.0);
  } else {
    // Enumerate far enough that the remaining upper tail is negligible, then
    // shrink to the first cutoff whose tail is below kTailCutoff.
    const auto far = static_cast<std::size_t>(std::ceil(excess + 40.0 * std::sqrt(excess) + 60.0));
    std::vector<double> pmf(far + 1);
    for (std::size_t k = 0; k <= far; ++k) pmf[k] = std::exp(log_poisson_pmf(excess, k));
    std::vector<double> suffix(far + 2, 0.0);
    for (std::size_t k = far + 1; k-- > 0;) suffix[k] = suffix[k + 1] + pmf[k];
    std::size_t cutoff = 0;
    while (cutoff < far && suffix[cutoff + 1] >= kTailCutoff) ++cutoff;
    tail = suffix[cutoff + 1];
    for (std::size_t k = 0; k <= cutoff; ++k) ex_log.push_back(log_poisson_pmf(excess, k));
  }

  double mass = 0.0;
  for (std::size_t a = 0; a <= m; ++a) {
    const double lb = log_binomial(a);
    if (std::isinf(lb)) continue;
    for (double le : ex_log) {
      const double lj = lb + le;
      if (std::isinf(lj)) continue;
      if (score_leq(lj, observed)) mass += std::exp(lj);
    }
  }
  return std::clamp(mass + tail, 0.0, 1.0);
}

StatisticsModel::StatisticsModel(const GbterParams& params, bool truncate_poisson) : partition_(params.partition) {
  const auto eps = excess_degrees(params);
  nodes_.resize(params.num_nodes());
  for (NodeIndex i = 0; i < nodes_.size(); ++i) {
    const auto c = partition_.community_of(i);
    nodes_[i] = NodeDegreeModel{partition_.community_size(c), params.density[c], eps[i], params.num_nodes(),
                                truncate_poisson};
  }
  // The observable external degree is at most |V| - |C|.
  log_binomial_.resize(nodes_.size());
  log_poisson_.resize(nodes_.size());
  for (NodeIndex i = 0; i < nodes_.size(); ++i) {
    const auto& m = nodes_[i];
    for (std::size_t d = 0; d < m.community_size; ++d) log_binomial_[i].push_back(m.log_binomial(d));
    if (m.truncate_poisson && m.excess > 0.0) {
      // Normalise once instead of on every call.
      const std::size_t cap = m.num_nodes - 1;
      std::vector<double> raw;
      for (std::size_t k = 0; k <= cap; ++k) raw.push_back(log_poisson_pmf(m.excess, k));
      const double mx = *std::max_element(raw.begin(), raw.end());
      double s = 0.0;
      for (double v : raw) s += std::exp(v - mx);
      const double log_norm = mx + std::log(s);
      for (std::size_t d = 0; d <= m.num_nodes - m.community_size; ++d) log_poisson_[i].push_back(raw[d] - log_norm);
    } else {
      for (std::size_t d = 0; d <= m.num_nodes - m.community_size; ++d) log_poisson_[i].push_back(m.log_poisson(d));
    }
  }
}

LogProb StatisticsModel::node(const LabeledGraph& g, NodeIndex i) const {
  if (g.num_nodes() != nodes_.size()) throw InvalidArgument("graph universe does not match model");
  const auto d = split_degree(g, i, partition_);
  return LogProb(node_score(i, d.internal, d.external));
}

std::vector<double> StatisticsModel::node_scores(const LabeledGraph& g) const {
  std::vector<double> out(nodes_.size());
  for (NodeIndex i = 0; i < nodes_.size(); ++i) out[i] = node(g, i).value();
  return out;
}

LogProb StatisticsModel::subgraph(const LabeledGraph& g, std::span<const NodeIndex> nodes) const {
  LogProb s;
  for (NodeIndex i : nodes) {
    if (i >= nodes_.size()) throw InvalidArgument("node " + std::to_string(i) + " outside universe");
    s += node(g, i);
  }
  return s;
}

double StatisticsModel::node_pvalue_exact(const LabeledGraph& g, NodeIndex i) const {
  if (g.num_nodes() != nodes_.size()) throw InvalidArgument("graph universe does not match model");
  const auto d = split_degree(g, i, partition_);
  return nodes_.at(i).pvalue(d.internal, d.external);
}

LogProb stats_node_log_prob(const GbterParams& params, const LabeledGraph& g, NodeIndex i, bool truncate_poisson) {
  return StatisticsModel(params, truncate_poisson).node(g, i);
}

LogProb stats_subgraph_log_prob(const GbterParams& params, const LabeledGraph& g, std::span<const NodeIndex> nodes,
                                bool truncate_poisson) {
  return StatisticsModel(params, truncate_poisson).subgraph(g, nodes);
}

double stats_node_pvalue_exact(const GbterParams& params, const LabeledGraph& g, NodeIndex i,
                               bool truncate_poisson) {
  return StatisticsModel(params, truncate_poisson).node_pvalue_exact(g, i);
}

}  // namespace mlad
