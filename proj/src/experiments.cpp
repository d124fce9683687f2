#include "mlad/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "mlad/error.hpp"

namespace mlad {

namespace {

constexpr std::size_t kNodes = 40;
constexpr std::size_t kCommunitySize = 4;
constexpr double kDensity = 0.8;

Partition blocks_of_four() {
  std::vector<std::vector<NodeIndex>> comms;
  for (NodeIndex c = 0; c < kNodes / kCommunitySize; ++c) {
    std::vector<NodeIndex> m;
    for (NodeIndex k = 0; k < kCommunitySize; ++k) m.push_back(c * kCommunitySize + k);
    comms.push_back(std::move(m));
  }
  return Partition(kNodes, std::move(comms));
}

// Regular-model community that holds most of `members` (lowest id on ties).
CommunityId majority_community(const std::vector<NodeIndex>& members, const Partition& reference) {
  std::vector<std::size_t> votes(reference.num_communities(), 0);
  for (NodeIndex i : members) ++votes[reference.community_of(i)];
  return static_cast<CommunityId>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

}  // namespace

std::string to_string(Level level) {
  switch (level) {
    case Level::Graph: return "graph";
    case Level::Community: return "community";
    case Level::Node: return "node";
  }
  return "unknown";
}

std::vector<double> truncated_powerlaw_degrees(std::size_t n, int lo, int hi, double exponent, RandomStream& rng) {
  if (lo < 1 || hi < lo) throw InvalidArgument("power-law support must satisfy 1 <= lo <= hi");
  std::vector<double> weights;
  for (int d = lo; d <= hi; ++d) weights.push_back(std::pow(static_cast<double>(d), -exponent));
  double total = 0.0;
  for (double w : weights) total += w;
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double u = uniform01(rng) * total;
    int d = hi;
    for (std::size_t k = 0; k < weights.size(); ++k) {
      if (u < weights[k]) {
        d = lo + static_cast<int>(k);
        break;
      }
      u -= weights[k];
    }
    out.push_back(static_cast<double>(d));
  }
  return out;
}

GbterParams regular_model(std::uint64_t spec_seed) {
  GbterParams p;
  p.universe = NodeUniverse::numbered(kNodes);
  p.partition = blocks_of_four();
  p.density.assign(p.partition.num_communities(), kDensity);
  auto rng = make_stream(spec_seed, 0xde9);
  p.expected_degree = truncated_powerlaw_degrees(kNodes, 5, 8, 2.5, rng);
  p.validate();
  return p;
}

ExperimentSpec build_experiment1(std::uint64_t spec_seed) {
  ExperimentSpec spec;
  spec.name = "experiment1";
  spec.regular = regular_model(spec_seed);
  spec.anomaly = spec.regular;
  std::vector<std::vector<NodeIndex>> comms = {{0, 11, 2, 4}, {3, 5, 6, 8}, {7, 9, 10, 1}};
  for (NodeIndex c = 3; c < kNodes / kCommunitySize; ++c) comms.push_back(spec.regular.partition.members(c));
  spec.anomaly.partition = Partition(kNodes, std::move(comms));
  spec.anomaly.density.assign(spec.anomaly.partition.num_communities(), kDensity);
  spec.anomaly.validate();
  spec.anomalous_nodes = {1, 3, 4, 7, 8, 11};
  spec.anomalous_communities = {0, 1, 2};
  return spec;
}

ExperimentSpec build_experiment2(std::uint64_t spec_seed) {
  ExperimentSpec spec;
  spec.name = "experiment2";
  spec.regular = regular_model(spec_seed);
  spec.anomaly = spec.regular;
  for (CommunityId c = 0; c < 4; ++c) {
    spec.anomaly.density[c] = 0.4;
    spec.anomalous_communities.push_back(c);
    for (NodeIndex i : spec.anomaly.partition.members(c)) {
      spec.anomaly.expected_degree[i] += 2.0;
      spec.anomalous_nodes.push_back(i);
    }
  }
  spec.anomaly.validate();
  return spec;
}

ExperimentScores run_experiment(const ExperimentSpec& spec, const PipelineConfig& cfg, std::uint64_t seed) {
  spec.regular.validate();
  spec.anomaly.validate();
  if (!(*spec.regular.universe == *spec.anomaly.universe)) throw InvalidArgument("models must share a universe");

  PipelineConfig run_cfg = cfg;
  run_cfg.detect.seed = seed ^ 0xa5a5a5a5a5a5a5a5ULL;

  const GbterSampler regular(spec.regular), anomaly(spec.anomaly);
  auto data_rng = make_stream(seed, 1);

  GraphSequence training;
  training.universe = spec.regular.universe;
  for (std::size_t k = 0; k < spec.train_count; ++k) training.snapshots.push_back(regular(data_rng));

  auto pipeline = Pipeline::fit(training, run_cfg);
  ExperimentScores out;
  out.clustering_matches_truth = pipeline.params().partition == spec.regular.partition;

  const std::set<NodeIndex> bad_nodes(spec.anomalous_nodes.begin(), spec.anomalous_nodes.end());
  const std::set<CommunityId> bad_comms(spec.anomalous_communities.begin(), spec.anomalous_communities.end());

  for (std::size_t t = 1; t <= spec.stream_count; ++t) {
    const bool anomalous = spec.is_anomalous_step(t);
    if (anomalous) ++out.anomalous_graphs;
    const auto g = anomalous ? anomaly(data_rng) : regular(data_rng);
    const auto step = pipeline.step(g, std::to_string(t));
    const auto& part = step.params.partition;
    for (const auto& r : step.reports) {
      out.scores[{r.detector, Level::Graph}].push_back({r.graph_pvalue, anomalous});
      if (!r.hierarchical()) continue;
      auto& comm_scores = out.scores[{r.detector, Level::Community}];
      for (CommunityId c = 0; c < part.num_communities(); ++c) {
        const bool truth = anomalous && bad_comms.count(majority_community(part.members(c), spec.regular.partition));
        comm_scores.push_back({r.community_pvalues[c], truth});
      }
      auto& node_scores = out.scores[{r.detector, Level::Node}];
      for (NodeIndex i = 0; i < r.node_pvalues.size(); ++i)
        node_scores.push_back({r.node_pvalues[i], anomalous && bad_nodes.count(i) > 0});
    }
  }
  return out;
}

Evaluation evaluate(const ScoreList& scores) {
  Evaluation ev;
  std::size_t pos = 0;
  for (const auto& s : scores) pos += s.anomalous ? 1 : 0;
  const std::size_t neg = scores.size() - pos;
  if (pos == 0 || neg == 0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    ev.degenerate = true;
    ev.curve.auc = ev.best_alpha = ev.precision = ev.recall = ev.f1 = nan;
    return ev;
  }

  ScoreList sorted = scores;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.pvalue < b.pvalue; });

  ev.curve.points.push_back({-std::numeric_limits<double>::infinity(), 0.0, 0.0});
  std::size_t tp = 0, fp = 0;
  double best_f1 = -1.0;
  for (std::size_t k = 0; k < sorted.size();) {
    const double alpha = sorted[k].pvalue;
    while (k < sorted.size() && sorted[k].pvalue == alpha) {
      if (sorted[k].anomalous)
        ++tp;
      else
        ++fp;
      ++k;
    }
    const double tpr = static_cast<double>(tp) / static_cast<double>(pos);
    const double fpr = static_cast<double>(fp) / static_cast<double>(neg);
    const auto& prev = ev.curve.points.back();
    ev.curve.auc += (fpr - prev.fpr) * (tpr + prev.tpr) / 2.0;
    ev.curve.points.push_back({alpha, tpr, fpr});

    const double f1 = 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + (pos - tp));
    if (f1 > best_f1) {
      best_f1 = f1;
      ev.best_alpha = alpha;
      ev.tp = tp;
      ev.fp = fp;
      ev.fn = pos - tp;
      ev.tn = neg - fp;
    }
  }
  ev.precision = ev.tp + ev.fp > 0 ? static_cast<double>(ev.tp) / static_cast<double>(ev.tp + ev.fp) : 0.0;
  ev.recall = static_cast<double>(ev.tp) / static_cast<double>(pos);
  ev.f1 = ev.precision + ev.recall > 0 ? 2.0 * ev.precision * ev.recall / (ev.precision + ev.recall) : 0.0;
  return ev;
}

std::vector<TableRow> experiment_table(const ExperimentScores& scores) {
  constexpr std::pair<Level, DetectorKind> order[] = {
      {Level::Graph, DetectorKind::Statistics},     {Level::Graph, DetectorKind::Probability},
      {Level::Graph, DetectorKind::Baseline},       {Level::Community, DetectorKind::Statistics},
      {Level::Community, DetectorKind::Probability}, {Level::Node, DetectorKind::Statistics},
      {Level::Node, DetectorKind::Probability}};
  std::vector<TableRow> rows;
  for (const auto& [level, detector] : order) {
    const auto it = scores.scores.find({detector, level});
    if (it == scores.scores.end()) continue;
    rows.push_back({level, detector, evaluate(it->second)});
  }
  return rows;
}

namespace {

std::string number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x < 0 ? "-inf" : "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

void write_table_csv(std::ostream& out, const std::vector<TableRow>& rows) {
  out << "level,method,alpha,f1,precision,recall,auc\n";
  for (const auto& r : rows)
    out << to_string(r.level) << ',' << to_string(r.detector) << ',' << number(r.eval.best_alpha) << ','
        << number(r.eval.f1) << ',' << number(r.eval.precision) << ',' << number(r.eval.recall) << ','
        << number(r.eval.curve.auc) << '\n';
}

void write_roc_csv(std::ostream& out, const EvalCurve& curve) {
  out << "threshold,tpr,fpr\n";
  for (const auto& p : curve.points) out << number(p.threshold) << ',' << number(p.tpr) << ',' << number(p.fpr) << '\n';
}

}  // namespace mlad
