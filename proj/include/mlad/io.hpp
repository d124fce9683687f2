#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "mlad/graph.hpp"

namespace mlad::io {

// Edge-list text format:
//   #nodes: A,B,C
//   A B
//   B C
// Blank lines and other '#' lines are ignored. Labels may not contain
// whitespace or commas in this format.
LabeledGraph read_edge_list(std::istream& in, const std::string& source = "<stream>");
LabeledGraph read_edge_list(const std::filesystem::path& path);
/// Canonical form: labels sorted lexicographically, edges sorted by label pair.
void write_edge_list(std::ostream& out, const LabeledGraph& g);
void write_edge_list(const std::filesystem::path& path, const LabeledGraph& g);

// Sequence document:
//   { "universe": [...], "snapshots": [ { "t": key, "edges": [["A","B"], ...] }, ... ] }
GraphSequence read_sequence_json(std::istream& in, const std::string& source = "<stream>");
GraphSequence read_sequence_json(const std::filesystem::path& path);
void write_sequence_json(std::ostream& out, const GraphSequence& seq);
void write_sequence_json(const std::filesystem::path& path, const GraphSequence& seq);

/// Season CSV with header `season,team_a,team_b`, one game per row. Repeat
/// games within a season collapse to one edge. The universe is the sorted
/// union of all teams; seasons are ordered numerically when every key is an
/// integer, lexicographically otherwise.
GraphSequence read_season_csv(std::istream& in, const std::string& source = "<stream>");
GraphSequence read_season_csv(const std::filesystem::path& path);

/// Dispatches on extension: `.csv` -> season CSV, anything else -> sequence JSON.
GraphSequence load_sequence(const std::filesystem::path& path);

/// Splits one CSV record, honouring double-quoted fields.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace mlad::io
