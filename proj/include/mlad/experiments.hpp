#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "mlad/gbter.hpp"
#include "mlad/pipeline.hpp"

namespace mlad {

/// A hidden regular/anomaly model pair and the stream schedule for a
/// seeded-anomaly run. Community ids in the ground truth refer to the
/// regular model's partition.
struct ExperimentSpec {
  std::string name;
  GbterParams regular;
  GbterParams anomaly;
  std::size_t train_count = 100;
  std::size_t stream_count = 500;
  std::size_t anomaly_period = 5;
  std::vector<NodeIndex> anomalous_nodes;
  std::vector<CommunityId> anomalous_communities;

  /// Streamed snapshot t (1-based) is drawn from the anomaly model.
  bool is_anomalous_step(std::size_t t) const { return anomaly_period > 0 && t % anomaly_period == 0; }
};

inline constexpr std::uint64_t kDefaultSpecSeed = 2015;

/// Degrees drawn i.i.d. from P(d) ~ d^-exponent on {lo, ..., hi}.
std::vector<double> truncated_powerlaw_degrees(std::size_t n, int lo, int hi, double exponent, RandomStream& rng);

/// 40 nodes in ten communities of four, density 0.8, expected degrees in 5..8.
GbterParams regular_model(std::uint64_t spec_seed = kDefaultSpecSeed);

/// Anomaly model swaps two nodes between each of the first three communities.
ExperimentSpec build_experiment1(std::uint64_t spec_seed = kDefaultSpecSeed);
/// Anomaly model drops density to 0.4 in the first four communities and adds
/// two to their members' expected degrees.
ExperimentSpec build_experiment2(std::uint64_t spec_seed = kDefaultSpecSeed);

enum class Level { Graph, Community, Node };
std::string to_string(Level level);

struct LabeledScore {
  double pvalue = 1.0;
  bool anomalous = false;
};
using ScoreList = std::vector<LabeledScore>;

struct ExperimentScores {
  std::map<std::pair<DetectorKind, Level>, ScoreList> scores;
  std::size_t anomalous_graphs = 0;
  bool clustering_matches_truth = false;  // fitted partition equals the regular partition after training
};

/// Fits on train_count regular samples, then streams stream_count graphs
/// (every anomaly_period-th from the anomaly model), recording labelled
/// p-values per level for every enabled detector.
ExperimentScores run_experiment(const ExperimentSpec& spec, const PipelineConfig& cfg, std::uint64_t seed);

struct RocPoint {
  double threshold = 0.0;  // -inf for the leading "nothing flagged" point
  double tpr = 0.0;
  double fpr = 0.0;
};

struct EvalCurve {
  std::vector<RocPoint> points;  // ascending threshold
  double auc = 0.0;
};

struct Evaluation {
  /// Set when the labels contain a single class; metrics are then NaN.
  bool degenerate = false;
  EvalCurve curve;
  double best_alpha = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
};

/// ROC over p-value thresholds (flag when p <= alpha), trapezoidal AUC and
/// the alpha maximizing F1 (ties toward the smaller alpha).
Evaluation evaluate(const ScoreList& scores);

struct TableRow {
  Level level = Level::Graph;
  DetectorKind detector = DetectorKind::Statistics;
  Evaluation eval;
};

/// Rows in Table II order: graph (stats, prob, baseline), community (stats,
/// prob), node (stats, prob); pairs absent from `scores` are skipped.
std::vector<TableRow> experiment_table(const ExperimentScores& scores);
/// Header `level,method,alpha,f1,precision,recall,auc`; degenerate rows print nan.
void write_table_csv(std::ostream& out, const std::vector<TableRow>& rows);
/// Header `threshold,tpr,fpr`.
void write_roc_csv(std::ostream& out, const EvalCurve& curve);

}  // namespace mlad
