#include "mlad/service.hpp"

#include <algorithm>
#include <charconv>
#include <optional>
#include <set>

#include "mlad/error.hpp"

namespace mlad {

using nlohmann::json;

namespace {

ApiResponse error(int status, const std::string& message) { return {status, {{"error", message}}}; }

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= path.size()) {
    const auto end = path.find('/', start);
    const auto piece = path.substr(start, end == std::string::npos ? std::string::npos : end - start);
    if (!piece.empty()) parts.push_back(piece);
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return parts;
}

std::optional<std::size_t> parse_index(const std::string& s) {
  std::size_t v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

}  // namespace

ReportStore::ReportStore(RunManifest manifest, std::map<std::pair<std::string, DetectorKind>, json> reports)
    : manifest_(std::move(manifest)), reports_(std::move(reports)) {}

ReportStore ReportStore::load(const std::filesystem::path& manifest_path) {
  auto manifest = read_manifest(manifest_path);
  const auto dir = manifest_path.parent_path();
  std::map<std::pair<std::string, DetectorKind>, json> reports;
  for (const auto& e : manifest.reports) reports[{e.snapshot, e.detector}] = read_json_file(dir / e.path);
  return ReportStore(std::move(manifest), std::move(reports));
}

bool ReportStore::has_snapshot(const std::string& key) const {
  return std::find(manifest_.snapshots.begin(), manifest_.snapshots.end(), key) != manifest_.snapshots.end();
}

const json* ReportStore::report(const std::string& snapshot, DetectorKind d) const {
  const auto it = reports_.find({snapshot, d});
  return it == reports_.end() ? nullptr : &it->second;
}

ApiResponse handle_api(const ReportStore& store, const std::string& path,
                       const std::map<std::string, std::string>& query) {
  const auto parts = split_path(path);
  if (parts.size() < 2 || parts[0] != "api" || parts[1] != "snapshots") return error(404, "no such endpoint");

  if (parts.size() == 2) {
    json out = json::array();
    for (const auto& key : store.manifest().snapshots) {
      json graph = json::object();
      for (const auto& e : store.manifest().reports)
        if (e.snapshot == key) graph[to_string(e.detector)] = {{"pvalue", e.graph_pvalue}, {"flag", e.graph_flag}};
      out.push_back({{"key", key}, {"graph", graph}});
    }
    return {200, {{"snapshots", out}}};
  }

  const auto& key = parts[2];
  if (!store.has_snapshot(key)) return error(404, "unknown snapshot '" + key + "'");
  if (parts.size() < 4) return error(404, "no such endpoint");

  // Resolve the detector whose report backs the community and node views.
  const json* report = nullptr;
  DetectorKind detector = DetectorKind::Statistics;
  if (const auto it = query.find("detector"); it != query.end()) {
    try {
      detector = parse_detector(it->second);
    } catch (const InvalidArgument& e) {
      return error(400, e.what());
    }
    if (detector == DetectorKind::Baseline) return error(400, "the baseline detector has no community or node level");
    report = store.report(key, detector);
    if (!report) return error(404, "no " + it->second + " report for snapshot '" + key + "'");
  } else {
    for (auto d : {DetectorKind::Statistics, DetectorKind::Probability})
      if ((report = store.report(key, d))) {
        detector = d;
        break;
      }
    if (!report) return error(404, "snapshot '" + key + "' has no community-level report");
  }

  const auto& communities = report->at("communities");
  const auto& nodes = report->at("nodes");
  json head = {{"snapshot", key}, {"detector", to_string(detector)}};

  if (parts[3] == "communities") {
    if (parts.size() == 4) {
      head["communities"] = communities;
      return {200, head};
    }
    if (parts.size() != 6 || parts[5] != "subgraph") return error(404, "no such endpoint");
    const auto c = parse_index(parts[4]);
    if (!c) return error(400, "community id must be a non-negative integer, got '" + parts[4] + "'");
    if (*c >= communities.size()) return error(404, "unknown community " + parts[4]);
    const auto& comm = communities.at(*c);
    std::set<std::string> members;
    for (const auto& label : comm.at("members")) members.insert(label.get<std::string>());
    json member_nodes = json::array();
    for (const auto& n : nodes)
      if (members.count(n.at("label").get<std::string>())) member_nodes.push_back(n);
    json edges = json::array();
    for (const auto& e : report->at("edges"))
      if (members.count(e.at(0).get<std::string>()) || members.count(e.at(1).get<std::string>())) edges.push_back(e);
    head["community"] = comm;
    head["nodes"] = member_nodes;
    head["edges"] = edges;
    return {200, head};
  }

  if (parts[3] == "nodes") {
    if (parts.size() != 5) return error(404, "no such endpoint");
    for (const auto& n : nodes)
      if (n.at("label") == parts[4]) {
        head["node"] = n;
        return {200, head};
      }
    return error(404, "unknown node '" + parts[4] + "'");
  }
  return error(404, "no such endpoint");
}

}  // namespace mlad
