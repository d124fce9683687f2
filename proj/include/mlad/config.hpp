#pragma once

#include <filesystem>

#include <nlohmann/json_fwd.hpp>

#include "mlad/pipeline.hpp"

namespace mlad {

/// Overlays a JSON config document on the defaults. Recognised keys:
/// seed, mc_samples, truncate_poisson, thresholds{graph,community,node},
/// priors{density{alpha,beta},degree{alpha,beta}}, mcl{...}, weighting
/// ("counts"|"exponential"), gamma, detectors, update_with_anomalies,
/// recluster_every. Unknown keys are rejected.
PipelineConfig config_from_json(const nlohmann::json& doc, PipelineConfig base = {});
/// Full snapshot of every recognised key (supplied partitions are not serialised).
nlohmann::json config_to_json(const PipelineConfig& cfg);
/// Reads a config file; throws ParseError or InvalidArgument naming the path.
PipelineConfig load_config(const std::filesystem::path& path);

/// "prob,stats" -> kinds, in order, without duplicates.
std::vector<DetectorKind> parse_detector_list(const std::string& csv);

}  // namespace mlad
