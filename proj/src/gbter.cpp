#include "mlad/gbter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "mlad/error.hpp"

namespace mlad {

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

double chung_lu_term(double ei, double ej, double total) {
  if (total <= 0.0) return 0.0;
  return ei * ej / total;
}

}  // namespace

void GbterParams::validate() const {
  if (!universe) throw InvalidArgument("GBTER params need a universe");
  const auto n = universe->size();
  if (expected_degree.size() != n) throw InvalidArgument("one expected degree per node required");
  if (partition.num_nodes() != n) throw InvalidArgument("partition does not cover the universe");
  if (density.size() != partition.num_communities()) throw InvalidArgument("one density per community required");
  for (double p : density)
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("community density outside [0,1]");
  for (double l : expected_degree)
    if (!(l >= 0.0) || !std::isfinite(l)) throw InvalidArgument("expected degree must be finite and >= 0");
}

std::vector<double> excess_degrees(const GbterParams& params) {
  params.validate();
  std::vector<double> eps(params.num_nodes());
  for (NodeIndex i = 0; i < eps.size(); ++i) {
    const auto c = params.partition.community_of(i);
    const double stage_one = params.density[c] * static_cast<double>(params.partition.community_size(c) - 1);
    eps[i] = std::max(0.0, params.expected_degree[i] - stage_one);
  }
  return eps;
}

double edge_probability(const GbterParams& params, NodeIndex i, NodeIndex j) {
  if (i == j) throw InvalidArgument("edge probability undefined for i == j");
  const auto eps = excess_degrees(params);
  if (i >= eps.size() || j >= eps.size()) throw InvalidArgument("node index out of range");
  const double total = std::accumulate(eps.begin(), eps.end(), 0.0);
  const double cl = clamp01(chung_lu_term(eps[i], eps[j], total));
  const auto ci = params.partition.community_of(i);
  if (ci != params.partition.community_of(j)) return cl;
  const double p = params.density[ci];
  return clamp01(p + (1.0 - p) * cl);
}

std::vector<Edge> validate_chung_lu(const GbterParams& params) {
  const auto eps = excess_degrees(params);
  const double total = std::accumulate(eps.begin(), eps.end(), 0.0);
  std::vector<Edge> bad;
  for (NodeIndex i = 0; i < eps.size(); ++i)
    for (NodeIndex j = i + 1; j < eps.size(); ++j)
      if (eps[i] * eps[j] > total) bad.emplace_back(i, j);
  return bad;
}

EdgeProbabilityTable::EdgeProbabilityTable(const GbterParams& params)
    : n_(params.num_nodes()), prob_(n_ * n_, 0.0), cl_(n_ * n_, 0.0) {
  const auto eps = excess_degrees(params);
  const double total = std::accumulate(eps.begin(), eps.end(), 0.0);
  for (NodeIndex i = 0; i < n_; ++i) {
    const auto ci = params.partition.community_of(i);
    for (NodeIndex j = i + 1; j < n_; ++j) {
      const double cl = clamp01(chung_lu_term(eps[i], eps[j], total));
      double p = cl;
      if (params.partition.community_of(j) == ci) p = clamp01(params.density[ci] + (1.0 - params.density[ci]) * cl);
      prob_[i * n_ + j] = prob_[j * n_ + i] = p;
      cl_[i * n_ + j] = cl_[j * n_ + i] = cl;
    }
  }
}

GbterSampler::GbterSampler(const GbterParams& params) : universe_(params.universe), table_(params) {
  const auto n = table_.num_nodes();
  pairs_.reserve(n * (n - (n > 0 ? 1 : 0)) / 2);
  for (NodeIndex i = 0; i < n; ++i) {
    const auto ci = params.partition.community_of(i);
    for (NodeIndex j = i + 1; j < n; ++j) {
      const double p = params.partition.community_of(j) == ci ? params.density[ci] : 0.0;
      pairs_.push_back({Edge(i, j), p, table_.chung_lu(i, j)});
    }
  }
}

void GbterSampler::sample_edges(RandomStream& rng, std::vector<Edge>& edges) const {
  edges.clear();
  for (const auto& d : pairs_) {
    // Stage 1 (Erdos-Renyi inside the community), then an independent
    // Chung-Lu proposal on excess degrees; the pair is present if either fires.
    bool present = d.stage_one > 0.0 && uniform01(rng) < d.stage_one;
    if (d.chung_lu > 0.0 && uniform01(rng) < d.chung_lu) present = true;
    if (present) edges.push_back(d.pair);
  }
}

LabeledGraph GbterSampler::operator()(RandomStream& rng) const {
  std::vector<Edge> edges;
  sample_edges(rng, edges);
  return LabeledGraph(universe_, std::move(edges));
}

LabeledGraph sample_graph(const GbterParams& params, RandomStream& rng) { return GbterSampler(params)(rng); }

Eigen::MatrixXd expected_adjacency(const GbterParams& params) {
  const EdgeProbabilityTable table(params);
  const auto n = static_cast<Eigen::Index>(table.num_nodes());
  Eigen::MatrixXd ea = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j) ea(i, j) = table(static_cast<NodeIndex>(i), static_cast<NodeIndex>(j));
  return ea;
}

nlohmann::json params_to_json(const GbterParams& params) {
  params.validate();
  const auto& u = *params.universe;
  nlohmann::json doc;
  doc["universe"] = u.labels();
  doc["communities"] = nlohmann::json::array();
  for (const auto& members : params.partition.communities()) {
    auto arr = nlohmann::json::array();
    for (NodeIndex i : members) arr.push_back(u.label(i));
    doc["communities"].push_back(std::move(arr));
  }
  doc["density"] = params.density;
  doc["expected_degree"] = nlohmann::json::object();
  for (NodeIndex i = 0; i < params.num_nodes(); ++i) doc["expected_degree"][u.label(i)] = params.expected_degree[i];
  return doc;
}

GbterParams params_from_json(const nlohmann::json& doc, UniversePtr universe) {
  try {
    GbterParams params;
    params.universe = universe ? std::move(universe)
                               : std::make_shared<const NodeUniverse>(doc.at("universe").get<std::vector<std::string>>());
    const auto& u = *params.universe;
    std::vector<std::vector<NodeIndex>> comms;
    for (const auto& c : doc.at("communities")) {
      std::vector<NodeIndex> members;
      for (const auto& label : c) members.push_back(u.index(label.get<std::string>()));
      comms.push_back(std::move(members));
    }
    // Densities are listed in document order; canonical community order may differ.
    const auto density = doc.at("density").get<std::vector<double>>();
    if (density.size() != comms.size()) throw InvalidArgument("one density per community required");
    std::vector<std::pair<NodeIndex, double>> first_member;
    for (std::size_t c = 0; c < comms.size(); ++c) {
      if (comms[c].empty()) throw InvalidArgument("empty community");
      first_member.emplace_back(*std::min_element(comms[c].begin(), comms[c].end()), density[c]);
    }
    params.partition = Partition(u.size(), std::move(comms));
    params.density.resize(params.partition.num_communities());
    for (const auto& [node, p] : first_member) params.density[params.partition.community_of(node)] = p;
    params.expected_degree.assign(u.size(), 0.0);
    for (const auto& [label, value] : doc.at("expected_degree").items())
      params.expected_degree[u.index(label)] = value.get<double>();
    params.validate();
    return params;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("invalid GBTER parameter document: ") + e.what());
  }
}

}  // namespace mlad
