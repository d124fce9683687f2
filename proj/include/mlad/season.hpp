#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mlad/pipeline.hpp"

namespace mlad {

/// season -> team -> conference.
using ConferenceTable = std::map<std::string, std::map<std::string, std::string>>;

/// CSV with header `season,team,conference`. A team listed twice in one
/// season with different conferences is an error.
ConferenceTable read_conference_csv(std::istream& in, const std::string& source = "<stream>");
ConferenceTable read_conference_csv(const std::filesystem::path& path);

/// Teams whose conference in `season` differs from `previous`; teams absent
/// from either season are ignored.
std::set<std::string> conference_movers(const ConferenceTable& table, const std::string& previous,
                                        const std::string& season);
/// Conferences of `season` whose member set differs from `previous` (dissolved
/// conferences are not listed).
std::set<std::string> changed_conferences(const ConferenceTable& table, const std::string& previous,
                                          const std::string& season);

struct SeasonOutcome {
  std::string season;
  double graph_pvalue = 1.0;
  /// Majority conference of every detected community with p-value <= alpha_community.
  std::vector<std::string> flagged_conferences;
  std::set<std::string> changed;
  std::set<std::string> movers;
  double max_mover_pvalue = 0.0;      // over movers (0 when none)
  double min_stayer_pvalue = 1.0;     // over teams present in both seasons that did not move
};

struct SeasonEvaluation {
  std::vector<SeasonOutcome> seasons;
  std::size_t true_positives = 0;   // flagged communities whose conference changed
  std::size_t false_positives = 0;  // flagged communities whose conference did not change
  std::size_t changed_total = 0;
  std::size_t changed_detected = 0;
  double recall = 0.0;
  double precision = 0.0;
  std::string least_anomalous;  // season with the largest graph p-value
  bool nodes_separated = false;  // every mover <= alpha_node < every stayer
};

/// Scores every season after the first `train_prefix` with the Statistics
/// detector and compares against conference changes. `alpha_community` <= 0
/// selects the smallest attainable Monte-Carlo p-value, 1/(M+1).
SeasonEvaluation evaluate_seasons(const GraphSequence& seq, const ConferenceTable& conferences,
                                  std::size_t train_prefix, PipelineConfig cfg, double alpha_community = 0.0,
                                  double alpha_node = 1e-6);

}  // namespace mlad
