#include "mlad/pipeline.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "mlad/error.hpp"
#include "mlad/probability_detector.hpp"
#include "mlad/statistics_detector.hpp"

namespace mlad {

std::string to_string(DetectorKind d) {
  switch (d) {
    case DetectorKind::Probability: return "prob";
    case DetectorKind::Statistics: return "stats";
    case DetectorKind::Baseline: return "baseline";
  }
  return "unknown";
}

DetectorKind parse_detector(const std::string& name) {
  if (name == "prob") return DetectorKind::Probability;
  if (name == "stats") return DetectorKind::Statistics;
  if (name == "baseline") return DetectorKind::Baseline;
  throw InvalidArgument("unknown detector '" + name + "' (expected prob, stats or baseline)");
}

void DetectorConfig::validate() const {
  if (mc_samples < 1) throw InvalidArgument("mc_samples must be >= 1");
  for (double a : {thresholds.graph, thresholds.community, thresholds.node})
    if (!(a >= 0.0 && a <= 1.0)) throw InvalidArgument("thresholds must lie in [0,1]");
}

nlohmann::json report_to_json(const AnomalyReport& report, const Partition& partition, const LabeledGraph& g) {
  using nlohmann::json;
  const auto& u = *g.universe();
  json doc;
  doc["detector"] = to_string(report.detector);
  doc["snapshot"] = report.snapshot;
  doc["thresholds"] = {{"graph", report.thresholds.graph},
                       {"community", report.thresholds.community},
                       {"node", report.thresholds.node}};
  doc["graph"] = {{"pvalue", report.graph_pvalue}, {"flag", report.graph_flag}};
  doc["communities"] = json::array();
  doc["nodes"] = json::array();
  if (report.hierarchical()) {
    for (CommunityId c = 0; c < partition.num_communities(); ++c) {
      json members = json::array();
      for (NodeIndex i : partition.members(c)) members.push_back(u.label(i));
      doc["communities"].push_back({{"id", c},
                                    {"members", members},
                                    {"pvalue", report.community_pvalues.at(c)},
                                    {"flag", static_cast<bool>(report.community_flags.at(c))}});
    }
    for (NodeIndex i = 0; i < g.num_nodes(); ++i) {
      const auto d = split_degree(g, i, partition);
      doc["nodes"].push_back({{"label", u.label(i)},
                              {"community", partition.community_of(i)},
                              {"pvalue", report.node_pvalues.at(i)},
                              {"flag", static_cast<bool>(report.node_flags.at(i))},
                              {"degree", d.internal + d.external},
                              {"internal_degree", d.internal},
                              {"external_degree", d.external}});
    }
  }
  doc["edges"] = json::array();
  for (const auto& e : g.edges()) doc["edges"].push_back({u.label(e.first), u.label(e.second)});
  return doc;
}

Pipeline Pipeline::fit(const GraphSequence& training, PipelineConfig cfg) {
  cfg.detect.validate();
  if (cfg.detectors.empty()) throw InvalidArgument("no detectors enabled");
  Pipeline p;
  p.cfg_ = std::move(cfg);
  auto fitted = fit_gbter(training, p.cfg_.fit);
  p.state_ = std::move(fitted.state);
  p.params_ = std::move(fitted.params);
  p.history_ = training.snapshots;
  p.aggregate_ = p.cfg_.fit.weighting == Weighting::Counts ? aggregate_counts(training).weights
                                                           : aggregate_exponential(training, p.cfg_.fit.gamma).weights;
  if (p.enabled(DetectorKind::Baseline)) {
    if (training.size() < 2) throw InvalidArgument("the Gaussian baseline needs at least two training graphs");
    const auto ea = expected_adjacency(p.params_);
    for (const auto& g : training.snapshots) p.baseline_.observe(baseline_stats(g, ea));
  }
  return p;
}

bool Pipeline::enabled(DetectorKind d) const {
  return std::find(cfg_.detectors.begin(), cfg_.detectors.end(), d) != cfg_.detectors.end();
}

StepResult Pipeline::step(const LabeledGraph& g, const std::string& key) {
  if (!(*g.universe() == *state_.universe)) throw InvalidArgument("snapshot " + key + " has a different universe");
  const auto& part = params_.partition;
  const auto n = params_.num_nodes();
  const auto nc = part.num_communities();
  const auto& th = cfg_.detect.thresholds;

  StepResult result;
  result.params = params_;

  const bool use_prob = enabled(DetectorKind::Probability);
  const bool use_stats = enabled(DetectorKind::Statistics);

  if (use_prob || use_stats) {
    std::optional<ProbabilityModel> pm;
    std::optional<StatisticsModel> sm;
    if (use_prob) pm.emplace(params_);
    if (use_stats) sm.emplace(params_, cfg_.detect.truncate_poisson);

    auto community_sums = [&](const std::vector<double>& node_scores, double scale) {
      std::vector<double> out(nc, 0.0);
      for (NodeIndex i = 0; i < n; ++i) out[part.community_of(i)] += node_scores[i];
      for (double& v : out) v *= scale;
      return out;
    };

    // Observed scores.
    double prob_graph_obs = 0.0, stats_graph_obs = 0.0;
    std::vector<double> prob_node_obs, prob_comm_obs, stats_comm_obs;
    if (pm) {
      prob_graph_obs = pm->graph(g).value();
      prob_node_obs = pm->node_scores(g);
      prob_comm_obs = community_sums(prob_node_obs, 0.5);
    }
    if (sm) {
      const auto s = sm->node_scores(g);
      stats_comm_obs = community_sums(s, 1.0);
      for (double v : s) stats_graph_obs += v;
    }

    // One shared sample set per step serves every level of both detectors.
    std::size_t prob_graph_rank = 0, stats_graph_rank = 0;
    std::vector<std::size_t> prob_node_rank(n, 0), prob_comm_rank(nc, 0), stats_comm_rank(nc, 0);
    std::vector<CommunityId> community(n);
    for (NodeIndex i = 0; i < n; ++i) community[i] = part.community_of(i);
    const GbterSampler sampler(params_);
    auto rng = make_stream(cfg_.detect.seed, steps_);
    std::vector<Edge> sample;
    std::vector<double> ns(n), cs(nc);
    std::vector<std::size_t> d_in(n), d_ex(n);
    for (std::size_t m = 0; m < cfg_.detect.mc_samples; ++m) {
      sampler.sample_edges(rng, sample);
      if (pm) {
        if (score_leq(pm->score_edges(sample, ns), prob_graph_obs)) ++prob_graph_rank;
        std::fill(cs.begin(), cs.end(), 0.0);
        for (NodeIndex i = 0; i < n; ++i) {
          if (score_leq(ns[i], prob_node_obs[i])) ++prob_node_rank[i];
          cs[community[i]] += ns[i];
        }
        for (CommunityId c = 0; c < nc; ++c)
          if (score_leq(0.5 * cs[c], prob_comm_obs[c])) ++prob_comm_rank[c];
      }
      if (sm) {
        std::fill(d_in.begin(), d_in.end(), 0);
        std::fill(d_ex.begin(), d_ex.end(), 0);
        for (const auto& e : sample) {
          auto& d = community[e.first] == community[e.second] ? d_in : d_ex;
          ++d[e.first];
          ++d[e.second];
        }
        std::fill(cs.begin(), cs.end(), 0.0);
        double total = 0.0;
        for (NodeIndex i = 0; i < n; ++i) {
          const double v = sm->node_score(i, d_in[i], d_ex[i]);
          total += v;
          cs[community[i]] += v;
        }
        if (score_leq(total, stats_graph_obs)) ++stats_graph_rank;
        for (CommunityId c = 0; c < nc; ++c)
          if (score_leq(cs[c], stats_comm_obs[c])) ++stats_comm_rank[c];
      }
    }
    const double denom = static_cast<double>(cfg_.detect.mc_samples + 1);
    auto to_p = [&](std::size_t rank) { return static_cast<double>(rank + 1) / denom; };

    auto make_report = [&](DetectorKind kind) {
      AnomalyReport r;
      r.detector = kind;
      r.snapshot = key;
      r.thresholds = th;
      return r;
    };
    auto finish_flags = [&](AnomalyReport& r) {
      r.graph_flag = r.graph_pvalue <= th.graph;
      r.community_flags.resize(nc);
      for (CommunityId c = 0; c < nc; ++c) r.community_flags[c] = r.community_pvalues[c] <= th.community;
      r.node_flags.resize(n);
      for (NodeIndex i = 0; i < n; ++i) r.node_flags[i] = r.node_pvalues[i] <= th.node;
    };

    if (pm) {
      auto r = make_report(DetectorKind::Probability);
      r.graph_pvalue = to_p(prob_graph_rank);
      for (auto k : prob_comm_rank) r.community_pvalues.push_back(to_p(k));
      for (auto k : prob_node_rank) r.node_pvalues.push_back(to_p(k));
      finish_flags(r);
      result.reports.push_back(std::move(r));
    }
    if (sm) {
      auto r = make_report(DetectorKind::Statistics);
      r.graph_pvalue = to_p(stats_graph_rank);
      for (auto k : stats_comm_rank) r.community_pvalues.push_back(to_p(k));
      for (NodeIndex i = 0; i < n; ++i) r.node_pvalues.push_back(sm->node_pvalue_exact(g, i));
      finish_flags(r);
      result.reports.push_back(std::move(r));
    }
  }

  std::optional<BaselineStats> x;
  if (enabled(DetectorKind::Baseline)) {
    x = baseline_stats(g, expected_adjacency(params_));
    AnomalyReport r;
    r.detector = DetectorKind::Baseline;
    r.snapshot = key;
    r.thresholds = th;
    r.graph_pvalue = baseline_pvalue(baseline_, *x);
    r.graph_flag = r.graph_pvalue <= th.graph;
    result.reports.push_back(std::move(r));
  }

  const bool any_flag =
      std::any_of(result.reports.begin(), result.reports.end(), [](const auto& r) { return r.graph_flag; });
  result.updated = cfg_.update_with_anomalies || !any_flag;
  if (result.updated) {
    observe(g);
    if (x) baseline_.observe(*x);
  }
  ++steps_;
  if (cfg_.recluster_every > 0 && steps_ % cfg_.recluster_every == 0) recluster();
  params_ = state_.params();
  return result;
}

void Pipeline::observe(const LabeledGraph& g) {
  state_.observe(g);
  history_.push_back(g);
  if (cfg_.fit.weighting == Weighting::Exponential) aggregate_ *= cfg_.fit.gamma;
  for (const auto& e : g.edges()) {
    aggregate_(e.first, e.second) += 1.0;
    aggregate_(e.second, e.first) += 1.0;
  }
}

void Pipeline::recluster() {
  if (cfg_.fit.partition) return;
  auto mcl = markov_cluster(WeightedAggregate{state_.universe, aggregate_}, cfg_.fit.mcl);
  auto fresh = PosteriorState::from_prior(state_.universe, std::move(mcl.partition), state_.density_prior,
                                          state_.degree_prior);
  for (const auto& g : history_) fresh.observe(g);
  state_ = std::move(fresh);
}

std::pair<StepResult, Pipeline> stream_step(Pipeline pipeline, const LabeledGraph& g, const std::string& key) {
  auto r = pipeline.step(g, key);
  return {std::move(r), std::move(pipeline)};
}

}  // namespace mlad
