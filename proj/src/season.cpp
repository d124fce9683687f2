#include "mlad/season.hpp"

#include <fstream>

#include "mlad/error.hpp"
#include "mlad/io.hpp"

namespace mlad {

ConferenceTable read_conference_csv(std::istream& in, const std::string& source) {
  ConferenceTable table;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = io::split_csv_line(line);
    if (!header) {
      if (fields != std::vector<std::string>{"season", "team", "conference"})
        throw ParseError(source, lineno, "expected header 'season,team,conference'");
      header = true;
      continue;
    }
    if (fields.size() != 3) throw ParseError(source, lineno, "expected 3 fields");
    auto [it, inserted] = table[fields[0]].emplace(fields[1], fields[2]);
    if (!inserted && it->second != fields[2])
      throw ParseError(source, lineno, "team '" + fields[1] + "' has two conferences in season " + fields[0]);
  }
  if (!header) throw ParseError(source, lineno, "missing header");
  return table;
}

ConferenceTable read_conference_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return read_conference_csv(in, path.string());
}

namespace {

const std::map<std::string, std::string>& season_of(const ConferenceTable& table, const std::string& season) {
  const auto it = table.find(season);
  if (it == table.end()) throw InvalidArgument("no conference data for season " + season);
  return it->second;
}

std::map<std::string, std::set<std::string>> members_by_conference(const std::map<std::string, std::string>& s) {
  std::map<std::string, std::set<std::string>> out;
  for (const auto& [team, conf] : s) out[conf].insert(team);
  return out;
}

}  // namespace

std::set<std::string> conference_movers(const ConferenceTable& table, const std::string& previous,
                                        const std::string& season) {
  const auto& a = season_of(table, previous);
  const auto& b = season_of(table, season);
  std::set<std::string> out;
  for (const auto& [team, conf] : b) {
    const auto it = a.find(team);
    if (it != a.end() && it->second != conf) out.insert(team);
  }
  return out;
}

std::set<std::string> changed_conferences(const ConferenceTable& table, const std::string& previous,
                                          const std::string& season) {
  const auto a = members_by_conference(season_of(table, previous));
  const auto b = members_by_conference(season_of(table, season));
  std::set<std::string> out;
  for (const auto& [conf, members] : b) {
    const auto it = a.find(conf);
    if (it == a.end() || it->second != members) out.insert(conf);
  }
  return out;
}

SeasonEvaluation evaluate_seasons(const GraphSequence& seq, const ConferenceTable& conferences,
                                  std::size_t train_prefix, PipelineConfig cfg, double alpha_community,
                                  double alpha_node) {
  seq.validate();
  if (train_prefix < 1 || train_prefix >= seq.size()) throw InvalidArgument("training prefix out of range");
  cfg.detectors = {DetectorKind::Statistics};
  if (alpha_community <= 0.0) alpha_community = 1.0 / static_cast<double>(cfg.detect.mc_samples + 1);

  GraphSequence training;
  training.universe = seq.universe;
  for (std::size_t t = 0; t < train_prefix; ++t) training.snapshots.push_back(seq.snapshots[t]);
  auto pipeline = Pipeline::fit(training, cfg);

  const auto& u = *seq.universe;
  SeasonEvaluation ev;
  double best = -1.0;
  bool separated = true;
  for (std::size_t t = train_prefix; t < seq.size(); ++t) {
    const auto season = seq.key(t), previous = seq.key(t - 1);
    const auto step = pipeline.step(seq.snapshots[t], season);
    const auto& r = step.reports.front();
    const auto& part = step.params.partition;
    const auto& confs = season_of(conferences, season);

    SeasonOutcome out;
    out.season = season;
    out.graph_pvalue = r.graph_pvalue;
    out.changed = changed_conferences(conferences, previous, season);
    out.movers = conference_movers(conferences, previous, season);

    std::set<std::string> detected;
    for (CommunityId c = 0; c < part.num_communities(); ++c) {
      if (!(r.community_pvalues[c] <= alpha_community)) continue;
      std::map<std::string, std::size_t> votes;
      for (NodeIndex i : part.members(c))
        if (const auto it = confs.find(u.label(i)); it != confs.end()) ++votes[it->second];
      if (votes.empty()) continue;
      const auto majority = std::max_element(votes.begin(), votes.end(),
                                             [](const auto& a, const auto& b) { return a.second < b.second; })
                                ->first;
      out.flagged_conferences.push_back(majority);
      if (out.changed.count(majority)) {
        ++ev.true_positives;
        detected.insert(majority);
      } else {
        ++ev.false_positives;
      }
    }
    ev.changed_total += out.changed.size();
    ev.changed_detected += detected.size();

    const auto& prev_confs = season_of(conferences, previous);
    for (NodeIndex i = 0; i < u.size(); ++i) {
      const auto& team = u.label(i);
      if (!confs.count(team) || !prev_confs.count(team)) continue;
      const double p = r.node_pvalues[i];
      if (out.movers.count(team))
        out.max_mover_pvalue = std::max(out.max_mover_pvalue, p);
      else
        out.min_stayer_pvalue = std::min(out.min_stayer_pvalue, p);
    }
    if (!out.movers.empty() && !(out.max_mover_pvalue <= alpha_node)) separated = false;
    if (!(out.min_stayer_pvalue > alpha_node)) separated = false;

    if (out.graph_pvalue > best) {
      best = out.graph_pvalue;
      ev.least_anomalous = season;
    }
    ev.seasons.push_back(std::move(out));
  }
  ev.recall = ev.changed_total > 0 ? static_cast<double>(ev.changed_detected) / static_cast<double>(ev.changed_total)
                                   : 1.0;
  const auto flagged = ev.true_positives + ev.false_positives;
  ev.precision = flagged > 0 ? static_cast<double>(ev.true_positives) / static_cast<double>(flagged) : 0.0;
  ev.nodes_separated = separated;
  return ev;
}

}  // namespace mlad
