#include "mlad/run.hpp"

#include <fstream>

#include "mlad/config.hpp"
#include "mlad/error.hpp"

namespace mlad {

using nlohmann::json;

json manifest_to_json(const RunManifest& m) {
  json doc;
  doc["config"] = m.config;
  doc["inputs"] = m.inputs;
  doc["outputs"] = m.outputs;
  doc["train_prefix"] = m.train_prefix;
  doc["snapshots"] = m.snapshots;
  doc["reports"] = json::array();
  for (const auto& r : m.reports)
    doc["reports"].push_back({{"snapshot", r.snapshot},
                              {"detector", to_string(r.detector)},
                              {"path", r.path},
                              {"graph_pvalue", r.graph_pvalue},
                              {"graph_flag", r.graph_flag}});
  return doc;
}

RunManifest manifest_from_json(const json& doc) {
  try {
    RunManifest m;
    m.config = doc.at("config");
    m.inputs = doc.at("inputs").get<std::vector<std::string>>();
    m.outputs = doc.at("outputs").get<std::vector<std::string>>();
    m.train_prefix = doc.at("train_prefix").get<std::size_t>();
    m.snapshots = doc.at("snapshots").get<std::vector<std::string>>();
    for (const auto& r : doc.at("reports")) {
      ReportEntry e;
      e.snapshot = r.at("snapshot").get<std::string>();
      e.detector = parse_detector(r.at("detector").get<std::string>());
      e.path = r.at("path").get<std::string>();
      e.graph_pvalue = r.at("graph_pvalue").get<double>();
      e.graph_flag = r.at("graph_flag").get<bool>();
      m.reports.push_back(std::move(e));
    }
    return m;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("invalid manifest: ") + e.what());
  }
}

void write_json_file(const json& doc, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw InvalidArgument("failed writing " + path.string());
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string(), 0, std::string("malformed JSON at byte ") + std::to_string(e.byte));
  }
}

void write_manifest(const RunManifest& m, const std::filesystem::path& path) { write_json_file(manifest_to_json(m), path); }

RunManifest read_manifest(const std::filesystem::path& path) {
  try {
    return manifest_from_json(read_json_file(path));
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
}

StreamRun run_stream(const GraphSequence& seq, std::size_t train_prefix, const PipelineConfig& cfg,
                     const std::filesystem::path& out_dir, const std::string& input_path) {
  seq.validate();
  if (train_prefix < 1) throw InvalidArgument("training prefix must hold at least one snapshot");
  if (train_prefix >= seq.size())
    throw InvalidArgument("training prefix of " + std::to_string(train_prefix) + " leaves nothing to detect in a " +
                          std::to_string(seq.size()) + "-snapshot sequence");

  GraphSequence training;
  training.universe = seq.universe;
  for (std::size_t t = 0; t < train_prefix; ++t) {
    training.snapshots.push_back(seq.snapshots[t]);
    training.keys.push_back(seq.key(t));
  }

  StreamRun run{RunManifest{}, {}, Pipeline::fit(training, cfg)};
  auto& m = run.manifest;
  m.config = config_to_json(cfg);
  if (!input_path.empty()) m.inputs.push_back(input_path);
  m.train_prefix = train_prefix;

  const bool write = !out_dir.empty();
  if (write) std::filesystem::create_directories(out_dir / "reports");

  for (std::size_t t = train_prefix; t < seq.size(); ++t) {
    const auto key = seq.key(t);
    auto step = run.pipeline.step(seq.snapshots[t], key);
    m.snapshots.push_back(key);
    for (const auto& r : step.reports) {
      ReportEntry e{key, r.detector, "reports/" + std::to_string(t) + "." + to_string(r.detector) + ".json", r.graph_pvalue,
                    r.graph_flag};
      if (write) {
        write_json_file(report_to_json(r, step.params.partition, seq.snapshots[t]), out_dir / e.path);
        m.outputs.push_back(e.path);
      }
      m.reports.push_back(std::move(e));
    }
    run.steps.push_back(std::move(step));
  }

  if (write) {
    write_json_file(params_to_json(run.pipeline.params()), out_dir / "params.json");
    write_json_file(posterior_to_json(run.pipeline.posterior()), out_dir / "posterior.json");
    m.outputs.push_back("params.json");
    m.outputs.push_back("posterior.json");
    write_manifest(m, out_dir / "manifest.json");
  }
  return run;
}

}  // namespace mlad
