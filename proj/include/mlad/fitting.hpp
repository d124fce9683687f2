#pragma once

#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mlad/gbter.hpp"
#include "mlad/graph.hpp"
#include "mlad/partition.hpp"

namespace mlad {

struct BetaPrior {
  double alpha = 1.0;
  double beta = 1.0;
};

struct GammaPrior {
  double alpha = 2.0;
  double beta = 1.5;
};

/// Beta posterior over one community's internal density.
struct BetaPosterior {
  double alpha_hat = 1.0;
  double beta_hat = 1.0;

  /// k internal edges seen out of m internal pairs.
  void observe(std::size_t k, std::size_t m) {
    alpha_hat += static_cast<double>(k);
    beta_hat += static_cast<double>(m - k);
  }
  /// Posterior mode, clamped to [0,1]. Throws when alpha_hat + beta_hat <= 2.
  double mode() const;

  friend bool operator==(const BetaPosterior&, const BetaPosterior&) = default;
};

/// Gamma posterior over one node's expected degree (shape/rate).
struct GammaPosterior {
  double alpha_hat = 2.0;
  double beta_hat = 1.5;

  void observe(std::size_t degree) {
    alpha_hat += static_cast<double>(degree);
    beta_hat += 1.0;
  }
  /// (alpha_hat - 1) / beta_hat.
  double mode() const;

  friend bool operator==(const GammaPosterior&, const GammaPosterior&) = default;
};

struct MclConfig {
  int expansion = 2;
  double inflation = 2.5;
  /// In units of the heaviest pair weight of the aggregate.
  double self_loop_weight = 1.0;
  double prune_threshold = 1e-5;
  int max_iters = 200;
  double convergence_eps = 1e-8;

  void validate() const;
};

struct MclResult {
  Partition partition;
  bool converged = false;
  int iterations = 0;
};

/// Markov clustering of a weighted aggregate. The result is always a
/// partition, whether or not the iteration converged.
MclResult markov_cluster(const WeightedAggregate& w, const MclConfig& cfg = {});

/// Density estimate for one community from per-graph internal edge counts.
struct DensityEstimate {
  BetaPosterior posterior;
  double density = 0.0;
};

DensityEstimate fit_density(std::span<const std::size_t> internal_counts, std::size_t community_size,
                            BetaPrior prior = {});
std::vector<DensityEstimate> fit_density(const GraphSequence& seq, const Partition& part, BetaPrior prior = {});

struct DegreeEstimate {
  GammaPosterior posterior;
  double expected_degree = 0.0;
};

DegreeEstimate fit_expected_degree(std::span<const std::size_t> degrees, GammaPrior prior = {});
std::vector<DegreeEstimate> fit_expected_degree(const GraphSequence& seq, GammaPrior prior = {});

/// Density for a community of the given size under a posterior; singletons
/// have no pairs and fall back to the prior mode (or prior mean when the mode
/// is not unique).
double density_estimate(const BetaPosterior& posterior, std::size_t community_size);

/// Number of edges of g with both endpoints in community c.
std::size_t internal_edge_count(const LabeledGraph& g, const Partition& part, CommunityId c);

/// Conjugate posterior parameters for every community and node.
struct PosteriorState {
  UniversePtr universe;
  Partition partition;
  BetaPrior density_prior;
  GammaPrior degree_prior;
  std::vector<BetaPosterior> density;
  std::vector<GammaPosterior> degree;
  std::size_t observations = 0;

  /// Prior-only state.
  static PosteriorState from_prior(UniversePtr universe, Partition partition, BetaPrior bp, GammaPrior gp);

  /// Adds g's sufficient statistics in place. Throws on universe mismatch.
  void observe(const LabeledGraph& g);
  /// MPLE parameters.
  GbterParams params() const;

  bool operator==(const PosteriorState& other) const;
};

/// Functional form of PosteriorState::observe.
PosteriorState update(PosteriorState state, const LabeledGraph& g);

enum class Weighting { Counts, Exponential };

struct FitConfig {
  MclConfig mcl;
  BetaPrior density_prior;
  GammaPrior degree_prior;
  Weighting weighting = Weighting::Counts;
  double gamma = 0.5;  // used with Weighting::Exponential
  /// Supplied communities replace Markov clustering when set.
  std::optional<Partition> partition;
};

struct FitResult {
  GbterParams params;
  PosteriorState state;
  bool clustering_converged = true;
};

/// Clusters the selected aggregate, then folds every snapshot into the posteriors.
FitResult fit_gbter(const GraphSequence& seq, const FitConfig& cfg = {});

void validate_priors(BetaPrior bp, GammaPrior gp);

nlohmann::json posterior_to_json(const PosteriorState& state);
PosteriorState posterior_from_json(const nlohmann::json& doc, UniversePtr universe = nullptr);

}  // namespace mlad
