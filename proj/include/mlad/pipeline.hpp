#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mlad/baseline.hpp"
#include "mlad/fitting.hpp"
#include "mlad/gbter.hpp"

namespace mlad {

enum class DetectorKind { Probability, Statistics, Baseline };

std::string to_string(DetectorKind d);
/// Accepts "prob", "stats", "baseline". Throws InvalidArgument otherwise.
DetectorKind parse_detector(const std::string& name);

struct Thresholds {
  double graph = 0.05;
  double community = 0.05;
  double node = 0.05;
};

struct DetectorConfig {
  std::size_t mc_samples = 2000;
  std::uint64_t seed = 0;
  Thresholds thresholds;
  bool truncate_poisson = false;

  void validate() const;
};

/// p-values and flags for one snapshot under one detector. The baseline
/// detector fills only the graph level.
struct AnomalyReport {
  DetectorKind detector = DetectorKind::Statistics;
  std::string snapshot;
  Thresholds thresholds;
  double graph_pvalue = 1.0;
  bool graph_flag = false;
  std::vector<double> community_pvalues;
  std::vector<bool> community_flags;
  std::vector<double> node_pvalues;
  std::vector<bool> node_flags;

  bool hierarchical() const noexcept { return detector != DetectorKind::Baseline; }
};

/// Serialized report: carries labels, community membership and the snapshot's
/// edges so a reader needs nothing else.
nlohmann::json report_to_json(const AnomalyReport& report, const Partition& partition, const LabeledGraph& g);

struct PipelineConfig {
  FitConfig fit;
  DetectorConfig detect;
  std::vector<DetectorKind> detectors{DetectorKind::Probability, DetectorKind::Statistics, DetectorKind::Baseline};
  /// When false, snapshots whose graph level is flagged by any enabled
  /// detector are not folded into the posteriors.
  bool update_with_anomalies = true;
  /// Re-run clustering every k streamed snapshots (0 = never).
  std::size_t recluster_every = 0;
};

struct StepResult {
  std::vector<AnomalyReport> reports;
  /// Parameters the snapshot was scored against.
  GbterParams params;
  bool updated = true;
};

/// Fit on a training prefix, then score-and-update one snapshot at a time.
class Pipeline {
public:
  /// Needs at least two training graphs when the baseline detector is enabled.
  static Pipeline fit(const GraphSequence& training, PipelineConfig cfg);

  /// Scores g with every enabled detector against the current parameters,
  /// then folds g into the posteriors and baseline moments.
  StepResult step(const LabeledGraph& g, const std::string& key);

  const PipelineConfig& config() const noexcept { return cfg_; }
  const PosteriorState& posterior() const noexcept { return state_; }
  const GbterParams& params() const noexcept { return params_; }
  const GaussianBaselineState& baseline() const noexcept { return baseline_; }
  std::size_t steps() const noexcept { return steps_; }

private:
  bool enabled(DetectorKind d) const;
  void observe(const LabeledGraph& g);
  void recluster();

  PipelineConfig cfg_;
  PosteriorState state_;
  GbterParams params_;
  GaussianBaselineState baseline_;
  std::size_t steps_ = 0;
  std::vector<LabeledGraph> history_;
  Eigen::MatrixXd aggregate_;
};

/// Functional form of Pipeline::step.
std::pair<StepResult, Pipeline> stream_step(Pipeline pipeline, const LabeledGraph& g, const std::string& key);

}  // namespace mlad
