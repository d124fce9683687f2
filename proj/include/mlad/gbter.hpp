#pragma once

#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "mlad/graph.hpp"
#include "mlad/partition.hpp"
#include "mlad/random.hpp"

namespace mlad {

/// Inputs of the generalized block two-level Erdos-Renyi model: a partition,
/// an internal edge density per community and an expected degree per node.
struct GbterParams {
  UniversePtr universe;
  Partition partition;
  std::vector<double> density;          // one per community, in [0,1]
  std::vector<double> expected_degree;  // one per node, >= 0

  std::size_t num_nodes() const noexcept { return expected_degree.size(); }
  /// Throws InvalidArgument when sizes disagree or values are out of range.
  void validate() const;
};

/// eps_i = max(0, lambda_i - p_j (|C_j| - 1)).
std::vector<double> excess_degrees(const GbterParams& params);

/// Probability of edge (i,j): p + (1-p) eps_i eps_j / sum(eps) inside a
/// community, eps_i eps_j / sum(eps) across communities. A zero excess sum
/// gives a zero Chung-Lu term; values are clamped to [0,1].
double edge_probability(const GbterParams& params, NodeIndex i, NodeIndex j);

/// Pairs whose Chung-Lu weight eps_i eps_j exceeds sum(eps).
std::vector<Edge> validate_chung_lu(const GbterParams& params);

/// Dense symmetric table of pair probabilities, built once per parameter set.
class EdgeProbabilityTable {
public:
  explicit EdgeProbabilityTable(const GbterParams& params);

  std::size_t num_nodes() const noexcept { return n_; }
  double operator()(NodeIndex i, NodeIndex j) const { return prob_[static_cast<std::size_t>(i) * n_ + j]; }
  /// Chung-Lu stage probability alone (clamped to [0,1]).
  double chung_lu(NodeIndex i, NodeIndex j) const { return cl_[static_cast<std::size_t>(i) * n_ + j]; }

private:
  std::size_t n_;
  std::vector<double> prob_;
  std::vector<double> cl_;
};

/// Two-stage draw: ER(|C_j|, p_j) inside each community, then an independent
/// Chung-Lu pass over every pair; the union is returned.
LabeledGraph sample_graph(const GbterParams& params, RandomStream& rng);

/// Same draw against precomputed tables, for repeated sampling.
class GbterSampler {
public:
  explicit GbterSampler(const GbterParams& params);

  LabeledGraph operator()(RandomStream& rng) const;
  /// Draws one graph into `edges` (cleared first), sorted by (first, second).
  void sample_edges(RandomStream& rng, std::vector<Edge>& edges) const;
  const EdgeProbabilityTable& table() const noexcept { return table_; }

private:
  struct PairDraw {
    Edge pair;
    double stage_one;  // community density, 0 across communities
    double chung_lu;
  };

  UniversePtr universe_;
  std::vector<PairDraw> pairs_;
  EdgeProbabilityTable table_;
};

/// E(A)_ij = edge_probability(i,j), zero diagonal.
Eigen::MatrixXd expected_adjacency(const GbterParams& params);

nlohmann::json params_to_json(const GbterParams& params);
/// Universe is taken from the document when `universe` is null.
GbterParams params_from_json(const nlohmann::json& doc, UniversePtr universe = nullptr);

}  // namespace mlad
