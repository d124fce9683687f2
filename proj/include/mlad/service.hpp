#pragma once

#include <filesystem>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "mlad/run.hpp"

namespace mlad {

/// Manifest plus every report document it lists, loaded once.
class ReportStore {
public:
  static ReportStore load(const std::filesystem::path& manifest_path);
  ReportStore(RunManifest manifest, std::map<std::pair<std::string, DetectorKind>, nlohmann::json> reports);

  const RunManifest& manifest() const noexcept { return manifest_; }
  bool has_snapshot(const std::string& key) const;
  /// Null when the run holds no such report.
  const nlohmann::json* report(const std::string& snapshot, DetectorKind d) const;

private:
  RunManifest manifest_;
  std::map<std::pair<std::string, DetectorKind>, nlohmann::json> reports_;
};

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

/// GET handler for /api/snapshots, /api/snapshots/{t}/communities,
/// /api/snapshots/{t}/communities/{c}/subgraph and /api/snapshots/{t}/nodes/{label}.
/// `path` is already percent-decoded. The optional `detector` query parameter
/// selects the report (default: stats, else prob). Unknown entities give 404,
/// malformed parameters 400.
ApiResponse handle_api(const ReportStore& store, const std::string& path,
                       const std::map<std::string, std::string>& query = {});

}  // namespace mlad
