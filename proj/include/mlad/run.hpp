#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mlad/pipeline.hpp"

namespace mlad {

struct ReportEntry {
  std::string snapshot;
  DetectorKind detector = DetectorKind::Statistics;
  std::string path;  // relative to the manifest's directory
  double graph_pvalue = 1.0;
  bool graph_flag = false;
};

/// Everything needed to replay a streaming run and to serve its reports.
struct RunManifest {
  nlohmann::json config;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::size_t train_prefix = 0;
  std::vector<std::string> snapshots;  // scored snapshot keys, in stream order
  std::vector<ReportEntry> reports;
};

nlohmann::json manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& doc);
void write_manifest(const RunManifest& m, const std::filesystem::path& path);
RunManifest read_manifest(const std::filesystem::path& path);

/// Writes `doc` with two-space indentation and a trailing newline.
void write_json_file(const nlohmann::json& doc, const std::filesystem::path& path);
nlohmann::json read_json_file(const std::filesystem::path& path);

struct StreamRun {
  RunManifest manifest;
  std::vector<StepResult> steps;
  Pipeline pipeline;
};

/// Fits on the first `train_prefix` snapshots and scores the rest. When
/// `out_dir` is non-empty, writes reports/<index>.<detector>.json,
/// params.json, posterior.json and manifest.json there.
/// Requires 1 <= train_prefix < seq.size().
StreamRun run_stream(const GraphSequence& seq, std::size_t train_prefix, const PipelineConfig& cfg,
                     const std::filesystem::path& out_dir = {}, const std::string& input_path = {});

}  // namespace mlad
