#include "mlad/fitting.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "mlad/error.hpp"

namespace mlad {

double BetaPosterior::mode() const {
  const double denom = alpha_hat + beta_hat - 2.0;
  if (!(denom > 0.0)) throw InvalidArgument("Beta posterior mode undefined (alpha_hat + beta_hat <= 2)");
  return std::clamp((alpha_hat - 1.0) / denom, 0.0, 1.0);
}

double GammaPosterior::mode() const {
  if (!(beta_hat > 0.0)) throw InvalidArgument("Gamma posterior rate must be > 0");
  return std::max(0.0, (alpha_hat - 1.0) / beta_hat);
}

void validate_priors(BetaPrior bp, GammaPrior gp) {
  if (!(bp.alpha > 0.0 && bp.beta > 0.0)) throw InvalidArgument("density prior requires alpha > 0 and beta > 0");
  if (!(gp.alpha > 1.0 && gp.beta > 1.0)) throw InvalidArgument("degree prior requires alpha > 1 and beta > 1");
}

double density_estimate(const BetaPosterior& posterior, std::size_t community_size) {
  if (community_size >= 2) return posterior.mode();
  if (posterior.alpha_hat + posterior.beta_hat > 2.0) return posterior.mode();
  return posterior.alpha_hat / (posterior.alpha_hat + posterior.beta_hat);
}

std::size_t internal_edge_count(const LabeledGraph& g, const Partition& part, CommunityId c) {
  std::size_t k = 0;
  for (NodeIndex i : part.members(c))
    for (NodeIndex j : g.neighbors(i))
      if (j > i && part.community_of(j) == c) ++k;
  return k;
}

DensityEstimate fit_density(std::span<const std::size_t> internal_counts, std::size_t community_size,
                            BetaPrior prior) {
  if (!(prior.alpha > 0.0 && prior.beta > 0.0)) throw InvalidArgument("density prior requires alpha > 0 and beta > 0");
  if (internal_counts.empty()) throw InvalidArgument("density fit needs at least one observed graph");
  const std::size_t pairs = community_size * (community_size - (community_size > 0 ? 1 : 0)) / 2;
  DensityEstimate est{BetaPosterior{prior.alpha, prior.beta}, 0.0};
  for (std::size_t k : internal_counts) {
    if (k > pairs) throw InvalidArgument("internal edge count exceeds community pairs");
    est.posterior.observe(k, pairs);
  }
  est.density = density_estimate(est.posterior, community_size);
  return est;
}

std::vector<DensityEstimate> fit_density(const GraphSequence& seq, const Partition& part, BetaPrior prior) {
  seq.validate();
  std::vector<DensityEstimate> out;
  out.reserve(part.num_communities());
  for (CommunityId c = 0; c < part.num_communities(); ++c) {
    std::vector<std::size_t> counts;
    counts.reserve(seq.size());
    for (const auto& g : seq.snapshots) counts.push_back(internal_edge_count(g, part, c));
    out.push_back(fit_density(counts, part.community_size(c), prior));
  }
  return out;
}

DegreeEstimate fit_expected_degree(std::span<const std::size_t> degrees, GammaPrior prior) {
  if (!(prior.alpha > 1.0 && prior.beta > 1.0)) throw InvalidArgument("degree prior requires alpha > 1 and beta > 1");
  if (degrees.empty()) throw InvalidArgument("degree fit needs at least one observed graph");
  DegreeEstimate est{GammaPosterior{prior.alpha, prior.beta}, 0.0};
  for (std::size_t d : degrees) est.posterior.observe(d);
  est.expected_degree = est.posterior.mode();
  return est;
}

std::vector<DegreeEstimate> fit_expected_degree(const GraphSequence& seq, GammaPrior prior) {
  seq.validate();
  std::vector<DegreeEstimate> out;
  out.reserve(seq.universe->size());
  for (NodeIndex i = 0; i < seq.universe->size(); ++i) {
    std::vector<std::size_t> degrees;
    degrees.reserve(seq.size());
    for (const auto& g : seq.snapshots) degrees.push_back(degree(g, i));
    out.push_back(fit_expected_degree(degrees, prior));
  }
  return out;
}

PosteriorState PosteriorState::from_prior(UniversePtr universe, Partition partition, BetaPrior bp, GammaPrior gp) {
  validate_priors(bp, gp);
  if (!universe || partition.num_nodes() != universe->size())
    throw InvalidArgument("partition does not cover the universe");
  PosteriorState s;
  s.universe = std::move(universe);
  s.density.assign(partition.num_communities(), BetaPosterior{bp.alpha, bp.beta});
  s.degree.assign(s.universe->size(), GammaPosterior{gp.alpha, gp.beta});
  s.partition = std::move(partition);
  s.density_prior = bp;
  s.degree_prior = gp;
  return s;
}

void PosteriorState::observe(const LabeledGraph& g) {
  if (!(*g.universe() == *universe)) throw InvalidArgument("graph universe does not match posterior state");
  for (CommunityId c = 0; c < partition.num_communities(); ++c) {
    const std::size_t sz = partition.community_size(c);
    density[c].observe(internal_edge_count(g, partition, c), sz * (sz - 1) / 2);
  }
  for (NodeIndex i = 0; i < degree.size(); ++i) degree[i].observe(mlad::degree(g, i));
  ++observations;
}

GbterParams PosteriorState::params() const {
  GbterParams p;
  p.universe = universe;
  p.partition = partition;
  p.density.reserve(density.size());
  for (CommunityId c = 0; c < density.size(); ++c)
    p.density.push_back(density_estimate(density[c], partition.community_size(c)));
  p.expected_degree.reserve(degree.size());
  for (const auto& d : degree) p.expected_degree.push_back(d.mode());
  return p;
}

bool PosteriorState::operator==(const PosteriorState& other) const {
  return *universe == *other.universe && partition == other.partition && density == other.density &&
         degree == other.degree && observations == other.observations;
}

PosteriorState update(PosteriorState state, const LabeledGraph& g) {
  state.observe(g);
  return state;
}

FitResult fit_gbter(const GraphSequence& seq, const FitConfig& cfg) {
  if (seq.snapshots.empty()) throw InvalidArgument("cannot fit an empty sequence");
  seq.validate();
  validate_priors(cfg.density_prior, cfg.degree_prior);

  FitResult result;
  Partition part;
  if (cfg.partition) {
    if (cfg.partition->num_nodes() != seq.universe->size())
      throw InvalidArgument("supplied partition does not cover the universe");
    part = *cfg.partition;
  } else {
    const auto agg = cfg.weighting == Weighting::Counts ? aggregate_counts(seq) : aggregate_exponential(seq, cfg.gamma);
    auto mcl = markov_cluster(agg, cfg.mcl);
    part = std::move(mcl.partition);
    result.clustering_converged = mcl.converged;
  }
  result.state = PosteriorState::from_prior(seq.universe, std::move(part), cfg.density_prior, cfg.degree_prior);
  for (const auto& g : seq.snapshots) result.state.observe(g);
  result.params = result.state.params();
  return result;
}

nlohmann::json posterior_to_json(const PosteriorState& state) {
  const auto& u = *state.universe;
  nlohmann::json doc;
  doc["universe"] = u.labels();
  doc["observations"] = state.observations;
  doc["density_prior"] = {state.density_prior.alpha, state.density_prior.beta};
  doc["degree_prior"] = {state.degree_prior.alpha, state.degree_prior.beta};
  doc["communities"] = nlohmann::json::array();
  for (CommunityId c = 0; c < state.partition.num_communities(); ++c) {
    auto members = nlohmann::json::array();
    for (NodeIndex i : state.partition.members(c)) members.push_back(u.label(i));
    doc["communities"].push_back(
        {{"members", members}, {"alpha_hat", state.density[c].alpha_hat}, {"beta_hat", state.density[c].beta_hat}});
  }
  doc["degrees"] = nlohmann::json::object();
  for (NodeIndex i = 0; i < state.degree.size(); ++i)
    doc["degrees"][u.label(i)] = {state.degree[i].alpha_hat, state.degree[i].beta_hat};
  return doc;
}

PosteriorState posterior_from_json(const nlohmann::json& doc, UniversePtr universe) {
  try {
    PosteriorState s;
    s.universe = universe ? std::move(universe)
                          : std::make_shared<const NodeUniverse>(doc.at("universe").get<std::vector<std::string>>());
    const auto& u = *s.universe;
    s.observations = doc.at("observations").get<std::size_t>();
    const auto bp = doc.at("density_prior").get<std::vector<double>>();
    const auto gp = doc.at("degree_prior").get<std::vector<double>>();
    if (bp.size() != 2 || gp.size() != 2) throw InvalidArgument("priors must be [alpha, beta] pairs");
    s.density_prior = {bp[0], bp[1]};
    s.degree_prior = {gp[0], gp[1]};

    std::vector<std::vector<NodeIndex>> comms;
    std::vector<std::pair<NodeIndex, BetaPosterior>> beta_by_first;
    for (const auto& c : doc.at("communities")) {
      std::vector<NodeIndex> members;
      for (const auto& label : c.at("members")) members.push_back(u.index(label.get<std::string>()));
      if (members.empty()) throw InvalidArgument("empty community");
      beta_by_first.emplace_back(*std::min_element(members.begin(), members.end()),
                                 BetaPosterior{c.at("alpha_hat").get<double>(), c.at("beta_hat").get<double>()});
      comms.push_back(std::move(members));
    }
    s.partition = Partition(u.size(), std::move(comms));
    s.density.resize(s.partition.num_communities());
    for (const auto& [node, post] : beta_by_first) s.density[s.partition.community_of(node)] = post;
    s.degree.assign(u.size(), GammaPosterior{s.degree_prior.alpha, s.degree_prior.beta});
    for (const auto& [label, v] : doc.at("degrees").items()) {
      const auto ab = v.get<std::vector<double>>();
      if (ab.size() != 2) throw InvalidArgument("degree posterior must be [alpha_hat, beta_hat]");
      s.degree[u.index(label)] = GammaPosterior{ab[0], ab[1]};
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("invalid posterior document: ") + e.what());
  }
}

}  // namespace mlad
