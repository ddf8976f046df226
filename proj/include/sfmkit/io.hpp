#pragma once

// JSON documents for systems and patterns (1-based [row, col] pairs), report
// builders, and DOT export of system digraphs.

#include <nlohmann/json.hpp>

#include <cstddef>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sfmkit/analysis.hpp"
#include "sfmkit/error.hpp"
#include "sfmkit/graph.hpp"
#include "sfmkit/system.hpp"

namespace sfmkit {

inline constexpr int report_schema_version = 1;

using Json = nlohmann::json;

struct SystemDocument {
  StructuralSystem system;
  std::optional<InformationPattern> k;
  bool operator==(const SystemDocument&) const = default;
};

namespace detail {

inline std::size_t read_dimension(const Json& doc, const char* key) {
  if (!doc.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  const Json& v = doc.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    throw ParseError(std::string("field '") + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

/// Reads a list of 1-based [row, col] pairs, or the string "identity" when
/// `allow_identity` is set and the shape is square.
inline StructuralPattern read_nonzeros(const Json& doc, const std::string& key, std::size_t rows, std::size_t cols,
                                       bool allow_identity) {
  StructuralPattern out(rows, cols);
  if (!doc.contains(key)) throw ParseError("missing field '" + key + "'");
  const Json& list = doc.at(key);
  if (allow_identity && list.is_string()) {
    if (list.get<std::string>() != "identity" || rows != cols)
      throw ParseError("field '" + key + "': only \"identity\" is accepted as a shorthand, for square shapes");
    return StructuralPattern::identity(rows);
  }
  if (!list.is_array()) throw ParseError("field '" + key + "' must be an array of [row, col] pairs");
  for (std::size_t idx = 0; idx < list.size(); ++idx) {
    const Json& pair = list[idx];
    const std::string where = "field '" + key + "' item " + std::to_string(idx);
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() || !pair[1].is_number_integer())
      throw ParseError(where + ": expected [row, col] integer pair");
    const long long r = pair[0].get<long long>(), c = pair[1].get<long long>();
    if (r < 1 || c < 1 || static_cast<std::size_t>(r) > rows || static_cast<std::size_t>(c) > cols)
      throw ParseError(where + ": [" + std::to_string(r) + ", " + std::to_string(c) + "] outside 1.." +
                       std::to_string(rows) + " x 1.." + std::to_string(cols));
    if (!out.insert({static_cast<std::size_t>(r - 1), static_cast<std::size_t>(c - 1)}))
      throw ParseError(where + ": duplicate entry [" + std::to_string(r) + ", " + std::to_string(c) + "]");
  }
  return out;
}

inline Json parse_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out.flush()) throw IoError("write to '" + path + "' failed");
}

}  // namespace detail

/// 1-based [[row, col], ...] in sorted order.
inline Json nonzeros_json(const StructuralPattern& p) {
  Json list = Json::array();
  for (const Entry& e : p.entries()) list.push_back({e.row + 1, e.col + 1});
  return list;
}

inline Json pattern_json(const StructuralPattern& p) {
  return {{"rows", p.rows()}, {"cols", p.cols()}, {"nonzeros", nonzeros_json(p)}};
}

inline StructuralPattern pattern_from_json(const Json& doc) {
  if (!doc.is_object()) throw ParseError("pattern document must be an object");
  const std::size_t rows = detail::read_dimension(doc, "rows");
  const std::size_t cols = detail::read_dimension(doc, "cols");
  return detail::read_nonzeros(doc, "nonzeros", rows, cols, false);
}

inline Json system_json(const StructuralSystem& sys, const std::optional<InformationPattern>& k = std::nullopt) {
  Json doc = {{"n", sys.n()},
              {"p", sys.p()},
              {"m", sys.m()},
              {"a_nonzeros", nonzeros_json(sys.a())},
              {"b_nonzeros", nonzeros_json(sys.b())},
              {"c_nonzeros", nonzeros_json(sys.c())}};
  if (k) doc["k_nonzeros"] = nonzeros_json(*k);
  return doc;
}

inline SystemDocument system_from_json(const Json& doc) {
  if (!doc.is_object()) throw ParseError("system document must be an object");
  const std::size_t n = detail::read_dimension(doc, "n");
  const std::size_t p = detail::read_dimension(doc, "p");
  const std::size_t m = detail::read_dimension(doc, "m");
  SystemDocument out{StructuralSystem(detail::read_nonzeros(doc, "a_nonzeros", n, n, false),
                                      detail::read_nonzeros(doc, "b_nonzeros", n, p, true),
                                      detail::read_nonzeros(doc, "c_nonzeros", m, n, true)),
                     std::nullopt};
  if (doc.contains("k_nonzeros")) out.k = detail::read_nonzeros(doc, "k_nonzeros", p, m, false);
  return out;
}

inline std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

inline SystemDocument parse_system(const std::string& text, const std::string& origin = "<input>") {
  return system_from_json(detail::parse_text(text, origin));
}

inline SystemDocument load_system(const std::string& path) {
  try {
    return parse_system(detail::read_file(path), path);
  } catch (const ParseError& e) {
    if (std::string(e.what()).starts_with(path)) throw;
    throw ParseError(path + ": " + e.what());
  }
}

inline void save_system(const std::string& path, const StructuralSystem& sys,
                        const std::optional<InformationPattern>& k = std::nullopt) {
  detail::write_file(path, dump(system_json(sys, k)));
}

inline StructuralPattern load_pattern(const std::string& path) {
  try {
    return pattern_from_json(detail::parse_text(detail::read_file(path), path));
  } catch (const ParseError& e) {
    if (std::string(e.what()).starts_with(path)) throw;
    throw ParseError(path + ": " + e.what());
  }
}

inline void save_pattern(const std::string& path, const StructuralPattern& p) {
  detail::write_file(path, dump(pattern_json(p)));
}

// ---------------------------------------------------------------------------
// Reports. Keys come out sorted (nlohmann::json objects are ordered maps).

inline Json arc_json(const SystemDigraph& d, const Arc& a) { return {d.label(a.tail), d.label(a.head)}; }

inline Json condition_a_json(const SystemDigraph& d, const ConditionAReport& r) {
  Json violating = Json::array();
  for (std::size_t i : r.violating_states) violating.push_back(d.label(d.state(i)));
  Json sccs = Json::array();
  for (std::size_t s = 0; s < r.sccs.scc_count(); ++s) {
    Json members = Json::array();
    for (Vertex v : r.sccs.members[s]) members.push_back(d.label(v));
    Json feedback = Json::array();
    if (const auto it = r.scc_feedback_map.find(s); it != r.scc_feedback_map.end())
      for (const Arc& a : it->second) feedback.push_back(arc_json(d, a));
    sccs.push_back({{"id", s}, {"members", members}, {"feedback_edges", feedback}});
  }
  return {{"holds", r.holds}, {"violating_states", violating}, {"sccs", sccs}};
}

inline Json cycle_family_json(const SystemDigraph& d, const std::optional<CycleFamily>& family) {
  if (!family) return nullptr;
  Json cycles = Json::array();
  for (const auto& cycle : family->cycles) {
    Json c = Json::array();
    for (Vertex v : cycle) c.push_back(d.label(v));
    cycles.push_back(c);
  }
  return cycles;
}

inline Json feasibility_json(const SystemDigraph& d, const FeasibilityReport& r) {
  return {{"feasible", r.feasible},
          {"condition_a", condition_a_json(d, r.condition_a)},
          {"condition_b", {{"holds", r.condition_b_witness.has_value()},
                           {"cycles", cycle_family_json(d, r.condition_b_witness)}}}};
}

inline Json essentiality_json(const EssentialityReport& r) {
  Json deletions = Json::array();
  for (const DeletionEvidence& ev : r.deletions)
    deletions.push_back({{"entry", {ev.entry.row + 1, ev.entry.col + 1}},
                         {"breaks_condition_a", ev.breaks_a},
                         {"breaks_condition_b", ev.breaks_b}});
  return {{"feasible", r.feasible}, {"essential", r.essential}, {"deletions", deletions}};
}

/// Wraps a payload with the command name and schema version.
inline Json report(const std::string& command, Json payload) {
  return {{"schema_version", report_schema_version}, {"command", command}, {"result", std::move(payload)}};
}

// ---------------------------------------------------------------------------
// DOT export

namespace detail {

inline const char* node_style(VertexKind k) {
  switch (k) {
    case VertexKind::state: return "shape=circle, color=black";
    case VertexKind::input: return "shape=box, color=blue";
    case VertexKind::output: return "shape=diamond, color=darkgreen";
  }
  return "";
}

}  // namespace detail

/// States are black circles, inputs blue boxes, outputs green diamonds,
/// feedback edges red. Non-trivial SCCs are drawn as clusters.
inline void export_dot(const SystemDigraph& d, std::ostream& out) {
  const Digraph& g = d.graph();
  out << "digraph G {\n";
  if (g.vertex_count() > 0) {
    const CondensationDag sccs = scc_decompose(g);
    std::vector<char> clustered(g.vertex_count(), 0);
    for (std::size_t s = 0; s < sccs.scc_count(); ++s) {
      if (sccs.members[s].size() < 2) continue;
      out << "  subgraph cluster_" << s << " {\n    style=dashed;\n";
      for (Vertex v : sccs.members[s]) {
        clustered[v] = 1;
        out << "    " << d.label(v) << " [" << detail::node_style(d.kind(v)) << "];\n";
      }
      out << "  }\n";
    }
    for (Vertex v = 0; v < g.vertex_count(); ++v)
      if (!clustered[v]) out << "  " << d.label(v) << " [" << detail::node_style(d.kind(v)) << "];\n";
    for (const Arc& a : g.edges()) {
      out << "  " << d.label(a.tail) << " -> " << d.label(a.head);
      if (d.is_feedback(a)) out << " [color=red, penwidth=2]";
      out << ";\n";
    }
  }
  out << "}\n";
}

inline std::string export_dot(const SystemDigraph& d) {
  std::ostringstream os;
  export_dot(d, os);
  return os.str();
}

inline void export_dot(const SystemDigraph& d, const std::string& path) { detail::write_file(path, export_dot(d)); }

}  // namespace sfmkit
