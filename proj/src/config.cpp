#include "mlad/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mlad/error.hpp"

namespace mlad {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw InvalidArgument(where + " must be an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) throw InvalidArgument("unknown config key '" + where + "." + key + "'");
}

template <class T>
void read_if(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

}  // namespace

std::vector<DetectorKind> parse_detector_list(const std::string& csv) {
  std::vector<DetectorKind> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw InvalidArgument("empty entry in detector list '" + csv + "'");
    const auto d = parse_detector(item);
    if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(d);
  }
  if (out.empty()) throw InvalidArgument("detector list is empty");
  return out;
}

PipelineConfig config_from_json(const json& doc, PipelineConfig cfg) {
  try {
    reject_unknown(doc,
                   {"seed", "mc_samples", "truncate_poisson", "thresholds", "priors", "mcl", "weighting", "gamma",
                    "detectors", "update_with_anomalies", "recluster_every"},
                   "config");
    read_if(doc, "seed", cfg.detect.seed);
    read_if(doc, "mc_samples", cfg.detect.mc_samples);
    read_if(doc, "truncate_poisson", cfg.detect.truncate_poisson);
    if (doc.contains("thresholds")) {
      const auto& t = doc.at("thresholds");
      reject_unknown(t, {"graph", "community", "node"}, "thresholds");
      read_if(t, "graph", cfg.detect.thresholds.graph);
      read_if(t, "community", cfg.detect.thresholds.community);
      read_if(t, "node", cfg.detect.thresholds.node);
    }
    if (doc.contains("priors")) {
      const auto& p = doc.at("priors");
      reject_unknown(p, {"density", "degree"}, "priors");
      if (p.contains("density")) {
        reject_unknown(p.at("density"), {"alpha", "beta"}, "priors.density");
        read_if(p.at("density"), "alpha", cfg.fit.density_prior.alpha);
        read_if(p.at("density"), "beta", cfg.fit.density_prior.beta);
      }
      if (p.contains("degree")) {
        reject_unknown(p.at("degree"), {"alpha", "beta"}, "priors.degree");
        read_if(p.at("degree"), "alpha", cfg.fit.degree_prior.alpha);
        read_if(p.at("degree"), "beta", cfg.fit.degree_prior.beta);
      }
    }
    if (doc.contains("mcl")) {
      const auto& m = doc.at("mcl");
      reject_unknown(m,
                     {"expansion", "inflation", "self_loop_weight", "prune_threshold", "max_iters",
                      "convergence_eps"},
                     "mcl");
      read_if(m, "expansion", cfg.fit.mcl.expansion);
      read_if(m, "inflation", cfg.fit.mcl.inflation);
      read_if(m, "self_loop_weight", cfg.fit.mcl.self_loop_weight);
      read_if(m, "prune_threshold", cfg.fit.mcl.prune_threshold);
      read_if(m, "max_iters", cfg.fit.mcl.max_iters);
      read_if(m, "convergence_eps", cfg.fit.mcl.convergence_eps);
    }
    if (doc.contains("weighting")) {
      const auto w = doc.at("weighting").get<std::string>();
      if (w == "counts")
        cfg.fit.weighting = Weighting::Counts;
      else if (w == "exponential")
        cfg.fit.weighting = Weighting::Exponential;
      else
        throw InvalidArgument("weighting must be 'counts' or 'exponential', got '" + w + "'");
    }
    read_if(doc, "gamma", cfg.fit.gamma);
    if (doc.contains("detectors")) {
      cfg.detectors.clear();
      for (const auto& d : doc.at("detectors")) {
        const auto kind = parse_detector(d.get<std::string>());
        if (std::find(cfg.detectors.begin(), cfg.detectors.end(), kind) == cfg.detectors.end())
          cfg.detectors.push_back(kind);
      }
      if (cfg.detectors.empty()) throw InvalidArgument("config enables no detectors");
    }
    read_if(doc, "update_with_anomalies", cfg.update_with_anomalies);
    read_if(doc, "recluster_every", cfg.recluster_every);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("invalid config value: ") + e.what());
  }
  cfg.detect.validate();
  cfg.fit.mcl.validate();
  validate_priors(cfg.fit.density_prior, cfg.fit.degree_prior);
  if (!(cfg.fit.gamma >= 0.0 && cfg.fit.gamma < 1.0)) throw InvalidArgument("gamma must lie in [0,1)");
  return cfg;
}

json config_to_json(const PipelineConfig& cfg) {
  json doc;
  doc["seed"] = cfg.detect.seed;
  doc["mc_samples"] = cfg.detect.mc_samples;
  doc["truncate_poisson"] = cfg.detect.truncate_poisson;
  doc["thresholds"] = {{"graph", cfg.detect.thresholds.graph},
                       {"community", cfg.detect.thresholds.community},
                       {"node", cfg.detect.thresholds.node}};
  doc["priors"] = {{"density", {{"alpha", cfg.fit.density_prior.alpha}, {"beta", cfg.fit.density_prior.beta}}},
                   {"degree", {{"alpha", cfg.fit.degree_prior.alpha}, {"beta", cfg.fit.degree_prior.beta}}}};
  const auto& m = cfg.fit.mcl;
  doc["mcl"] = {{"expansion", m.expansion},
                {"inflation", m.inflation},
                {"self_loop_weight", m.self_loop_weight},
                {"prune_threshold", m.prune_threshold},
                {"max_iters", m.max_iters},
                {"convergence_eps", m.convergence_eps}};
  doc["weighting"] = cfg.fit.weighting == Weighting::Counts ? "counts" : "exponential";
  doc["gamma"] = cfg.fit.gamma;
  doc["detectors"] = json::array();
  for (auto d : cfg.detectors) doc["detectors"].push_back(to_string(d));
  doc["update_with_anomalies"] = cfg.update_with_anomalies;
  doc["recluster_every"] = cfg.recluster_every;
  return doc;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string(), 0, std::string("malformed JSON at byte ") + std::to_string(e.byte));
  }
  try {
    return config_from_json(doc);
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
}

}  // namespace mlad
