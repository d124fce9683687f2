#include "mlad/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mlad/error.hpp"

namespace mlad::io {

namespace {

using json = nlohmann::json;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

std::vector<NodeIndex> label_order(const NodeUniverse& u) {
  std::vector<NodeIndex> order(u.size());
  for (NodeIndex i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](NodeIndex a, NodeIndex b) { return u.label(a) < u.label(b); });
  return order;
}

std::vector<std::pair<std::string, std::string>> canonical_edges(const LabeledGraph& g) {
  const auto& u = *g.universe();
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(g.num_edges());
  for (const auto& e : g.edges()) {
    auto a = u.label(e.first), b = u.label(e.second);
    if (b < a) std::swap(a, b);
    out.emplace_back(std::move(a), std::move(b));
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_integer(const std::string& s) {
  long long v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  return ec == std::errc() && p == end;
}

}  // namespace

LabeledGraph read_edge_list(std::istream& in, const std::string& source) {
  UniversePtr universe;
  std::vector<Edge> edges;
  std::set<Edge> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto text = trim(line);
    if (text.empty()) continue;
    if (text.rfind("#nodes:", 0) == 0) {
      if (universe) throw ParseError(source, lineno, "duplicate #nodes header");
      std::vector<std::string> labels;
      std::stringstream ss(text.substr(7));
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        auto lab = trim(tok);
        if (lab.empty()) continue;
        labels.push_back(std::move(lab));
      }
      try {
        universe = std::make_shared<const NodeUniverse>(std::move(labels));
      } catch (const InvalidArgument& e) {
        throw ParseError(source, lineno, e.what());
      }
      continue;
    }
    if (text.front() == '#') continue;
    if (!universe) throw ParseError(source, lineno, "edge before #nodes header");
    std::istringstream ss(text);
    std::string a, b, extra;
    if (!(ss >> a >> b) || (ss >> extra)) throw ParseError(source, lineno, "expected 'LABEL LABEL'");
    const auto ia = universe->find(a);
    if (!ia) throw ParseError(source, lineno, "unknown label '" + a + "'");
    const auto ib = universe->find(b);
    if (!ib) throw ParseError(source, lineno, "unknown label '" + b + "'");
    if (*ia == *ib) throw ParseError(source, lineno, "self-loop on '" + a + "'");
    const Edge e(*ia, *ib);
    if (!seen.insert(e).second) throw ParseError(source, lineno, "duplicate edge '" + a + " " + b + "'");
    edges.push_back(e);
  }
  if (!universe) throw ParseError(source, lineno, "missing #nodes header");
  return LabeledGraph(universe, std::move(edges));
}

LabeledGraph read_edge_list(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_edge_list(in, path.string());
}

void write_edge_list(std::ostream& out, const LabeledGraph& g) {
  const auto& u = *g.universe();
  out << "#nodes: ";
  bool first = true;
  for (NodeIndex i : label_order(u)) {
    if (!first) out << ',';
    out << u.label(i);
    first = false;
  }
  out << '\n';
  for (const auto& [a, b] : canonical_edges(g)) out << a << ' ' << b << '\n';
}

void write_edge_list(const std::filesystem::path& path, const LabeledGraph& g) {
  auto out = open_output(path);
  write_edge_list(out, g);
}

GraphSequence read_sequence_json(std::istream& in, const std::string& source) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(source, 0, "offset " + std::to_string(e.byte) + ": malformed JSON");
  }
  try {
    if (!doc.is_object() || !doc.contains("universe") || !doc.contains("snapshots"))
      throw ParseError(source, 0, "expected object with 'universe' and 'snapshots'");
    GraphSequence seq;
    seq.universe = std::make_shared<const NodeUniverse>(doc.at("universe").get<std::vector<std::string>>());
    const auto& snaps = doc.at("snapshots");
    if (!snaps.is_array()) throw ParseError(source, 0, "'snapshots' must be an array");
    bool any_key = false;
    for (std::size_t t = 0; t < snaps.size(); ++t) {
      const auto& s = snaps[t];
      const std::string where = "snapshots[" + std::to_string(t) + "]";
      std::string key = std::to_string(t);
      if (s.contains("t")) {
        any_key = true;
        key = s["t"].is_string() ? s["t"].get<std::string>() : s["t"].dump();
      }
      std::vector<Edge> edges;
      std::set<Edge> seen;
      for (const auto& pair : s.at("edges")) {
        if (!pair.is_array() || pair.size() != 2) throw ParseError(source, 0, where + ": edge must be a label pair");
        const auto a = pair[0].get<std::string>(), b = pair[1].get<std::string>();
        const auto ia = seq.universe->find(a), ib = seq.universe->find(b);
        if (!ia) throw ParseError(source, 0, where + ": unknown label '" + a + "'");
        if (!ib) throw ParseError(source, 0, where + ": unknown label '" + b + "'");
        if (*ia == *ib) throw ParseError(source, 0, where + ": self-loop on '" + a + "'");
        const Edge e(*ia, *ib);
        if (!seen.insert(e).second) throw ParseError(source, 0, where + ": duplicate edge '" + a + " " + b + "'");
        edges.push_back(e);
      }
      seq.snapshots.emplace_back(seq.universe, std::move(edges));
      seq.keys.push_back(std::move(key));
    }
    if (!any_key) seq.keys.clear();
    return seq;
  } catch (const json::exception& e) {
    throw ParseError(source, 0, std::string("invalid sequence document: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(source, 0, e.what());
  }
}

GraphSequence read_sequence_json(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_sequence_json(in, path.string());
}

void write_sequence_json(std::ostream& out, const GraphSequence& seq) {
  seq.validate();
  json doc;
  auto labels = seq.universe->labels();
  std::sort(labels.begin(), labels.end());
  doc["universe"] = labels;
  doc["snapshots"] = json::array();
  for (std::size_t t = 0; t < seq.size(); ++t) {
    json s;
    if (!seq.keys.empty()) s["t"] = seq.keys[t];
    s["edges"] = json::array();
    for (const auto& [a, b] : canonical_edges(seq.snapshots[t])) s["edges"].push_back({a, b});
    doc["snapshots"].push_back(std::move(s));
  }
  out << doc.dump(1) << '\n';
}

void write_sequence_json(const std::filesystem::path& path, const GraphSequence& seq) {
  auto out = open_output(path);
  write_sequence_json(out, seq);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        cur += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(trim(cur));
  return fields;
}

GraphSequence read_season_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    if (!trim(line).empty()) {
      header = split_csv_line(line);
      break;
    }
  }
  if (header != std::vector<std::string>{"season", "team_a", "team_b"})
    throw ParseError(source, lineno, "expected header 'season,team_a,team_b'");

  std::map<std::string, std::set<std::pair<std::string, std::string>>> games;
  std::set<std::string> teams;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto f = split_csv_line(line);
    if (f.size() != 3 || f[0].empty() || f[1].empty() || f[2].empty())
      throw ParseError(source, lineno, "expected 3 non-empty fields");
    if (f[1] == f[2]) throw ParseError(source, lineno, "self-loop on '" + f[1] + "'");
    teams.insert(f[1]);
    teams.insert(f[2]);
    if (f[2] < f[1]) std::swap(f[1], f[2]);
    games[f[0]].emplace(f[1], f[2]);
  }
  if (games.empty()) throw ParseError(source, lineno, "no games found");

  std::vector<std::string> seasons;
  for (const auto& [s, _] : games) seasons.push_back(s);
  if (std::all_of(seasons.begin(), seasons.end(), is_integer))
    std::sort(seasons.begin(), seasons.end(),
              [](const std::string& a, const std::string& b) { return std::stoll(a) < std::stoll(b); });

  GraphSequence seq;
  seq.universe = std::make_shared<const NodeUniverse>(std::vector<std::string>(teams.begin(), teams.end()));
  for (const auto& s : seasons) {
    std::vector<Edge> edges;
    for (const auto& [a, b] : games[s]) edges.emplace_back(seq.universe->index(a), seq.universe->index(b));
    seq.snapshots.emplace_back(seq.universe, std::move(edges));
    seq.keys.push_back(s);
  }
  return seq;
}

GraphSequence read_season_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_season_csv(in, path.string());
}

GraphSequence load_sequence(const std::filesystem::path& path) {
  if (path.extension() == ".csv") return read_season_csv(path);
  return read_sequence_json(path);
}

}  // namespace mlad::io
