#pragma once

// Structurally-fixed-mode analysis of a closed loop (A, B, K, C).
//
// Condition (a): every state vertex lies in an SCC of the closed-loop digraph
// that contains a feedback edge y -> u.
// Condition (b): the state vertices are covered by a family of vertex-disjoint
// cycles of the closed-loop digraph.
// The closed loop has no structurally fixed modes iff both hold.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "sfmkit/graph.hpp"
#include "sfmkit/system.hpp"

namespace sfmkit {

struct ConditionAReport {
  bool holds = false;
  std::vector<std::size_t> violating_states;            // state indices
  std::map<std::size_t, std::vector<Arc>> scc_feedback_map;  // scc id -> feedback arcs inside it
  CondensationDag sccs;                                  // of the closed-loop digraph
};

/// Vertex-disjoint cycles of a SystemDigraph, each listed in traversal order.
struct CycleFamily {
  std::vector<std::vector<Vertex>> cycles;
  bool operator==(const CycleFamily&) const = default;
};

struct FeasibilityReport {
  ConditionAReport condition_a;
  std::optional<CycleFamily> condition_b_witness;
  bool feasible = false;
};

enum class CoverRole : std::uint8_t { required, optional, excluded };

/// Vertex-disjoint cycles covering every `required` vertex, possibly using
/// `optional` ones, never touching `excluded` ones.
///
/// Reduction: perfect matching on the associated bipartite graph in which each
/// optional vertex also gets a pseudo self-loop (matched self-loop = vertex
/// left out). Following matched successors yields the cycles.
inline std::optional<std::vector<std::vector<Vertex>>> find_disjoint_cycle_cover(const Digraph& g,
                                                                               std::span<const CoverRole> roles) {
  const std::size_t n = g.vertex_count();
  if (roles.size() != n) throw DimensionError("cover roles must be given for every vertex");

  std::vector<std::size_t> slot(n, npos), vertex_of;
  for (Vertex v = 0; v < n; ++v) {
    if (roles[v] == CoverRole::excluded) continue;
    slot[v] = vertex_of.size();
    vertex_of.push_back(v);
  }
  const std::size_t k = vertex_of.size();
  BipartiteGraph b(k, k);
  for (std::size_t s = 0; s < k; ++s) {
    const Vertex v = vertex_of[s];
    for (Vertex w : g.successors(v))
      if (slot[w] != npos) b.add_edge(s, slot[w]);
    if (roles[v] == CoverRole::optional) b.add_edge(s, s);
  }
  const Matching m = max_matching(b);
  if (m.size() != k) return std::nullopt;

  std::vector<std::vector<Vertex>> cycles;
  std::vector<char> seen(k, 0);
  for (std::size_t s = 0; s < k; ++s) {
    if (seen[s]) continue;
    const std::size_t succ = *m.mate_of_left(s);
    if (succ == s && !g.has_edge(vertex_of[s], vertex_of[s])) {
      seen[s] = 1;  // pseudo self-loop: optional vertex left uncovered
      continue;
    }
    std::vector<Vertex> cycle;
    std::size_t cur = s;
    do {
      seen[cur] = 1;
      cycle.push_back(vertex_of[cur]);
      cur = *m.mate_of_left(cur);
    } while (cur != s);
    cycles.push_back(std::move(cycle));
  }
  return cycles;
}

inline ConditionAReport check_condition_a(const SystemDigraph& d) {
  ConditionAReport report;
  report.sccs = scc_decompose(d.graph());
  for (const Arc& a : d.edges_of(EdgeClass::output_input)) {
    if (report.sccs.same_scc(a.tail, a.head)) report.scc_feedback_map[report.sccs.scc_of[a.tail]].push_back(a);
  }
  for (std::size_t i = 0; i < d.state_count(); ++i) {
    if (!report.scc_feedback_map.contains(report.sccs.scc_of[d.state(i)])) report.violating_states.push_back(i);
  }
  report.holds = report.violating_states.empty();
  return report;
}

inline ConditionAReport check_condition_a(const StructuralSystem& sys, const InformationPattern& k) {
  return check_condition_a(build_closed_loop_digraph(sys, k));
}

inline std::optional<CycleFamily> check_condition_b(const SystemDigraph& d) {
  std::vector<CoverRole> roles(d.graph().vertex_count(), CoverRole::optional);
  for (std::size_t i = 0; i < d.state_count(); ++i) roles[d.state(i)] = CoverRole::required;
  auto cover = find_disjoint_cycle_cover(d.graph(), roles);
  if (!cover) return std::nullopt;
  return CycleFamily{std::move(*cover)};
}

inline std::optional<CycleFamily> check_condition_b(const StructuralSystem& sys, const InformationPattern& k) {
  return check_condition_b(build_closed_loop_digraph(sys, k));
}

inline FeasibilityReport check_feasible(const SystemDigraph& d) {
  FeasibilityReport report;
  report.condition_a = check_condition_a(d);
  report.condition_b_witness = check_condition_b(d);
  report.feasible = report.condition_a.holds && report.condition_b_witness.has_value();
  return report;
}

inline FeasibilityReport check_feasible(const StructuralSystem& sys, const InformationPattern& k) {
  return check_feasible(build_closed_loop_digraph(sys, k));
}

/// Verdict-only variant of check_feasible for enumeration loops.
inline bool is_feasible(const StructuralSystem& sys, const InformationPattern& k) {
  const SystemDigraph d = build_closed_loop_digraph(sys, k);
  return check_condition_a(d).holds && check_condition_b(d).has_value();
}

struct DeletionEvidence {
  Entry entry;
  bool breaks_a = false;
  bool breaks_b = false;
  bool blocks() const { return breaks_a || breaks_b; }
};

struct EssentialityReport {
  bool feasible = false;
  bool essential = false;
  std::vector<DeletionEvidence> deletions;  // one per nonzero of k, filled when k is feasible
};

/// Feasible, and deleting any single entry makes it infeasible. Feasibility is
/// monotone in the pattern, so this is equivalent to having no feasible strict
/// sub-pattern.
inline EssentialityReport is_essential(const StructuralSystem& sys, const InformationPattern& k) {
  require_compatible(sys, k);
  EssentialityReport report;
  report.feasible = is_feasible(sys, k);
  if (!report.feasible) return report;
  report.essential = true;
  for (const Entry& e : k.entries()) {
    const SystemDigraph d = build_closed_loop_digraph(sys, k.without(e));
    DeletionEvidence ev{e, !check_condition_a(d).holds, !check_condition_b(d).has_value()};
    report.essential = report.essential && ev.blocks();
    report.deletions.push_back(ev);
  }
  return report;
}

/// Cycles of `family` that use at least one feedback edge (the rest use only states).
inline std::vector<std::vector<Vertex>> feedback_cycles(const SystemDigraph& d, const CycleFamily& family) {
  std::vector<std::vector<Vertex>> out;
  for (const auto& cycle : family.cycles) {
    for (Vertex v : cycle) {
      if (d.kind(v) == VertexKind::input) {
        out.push_back(cycle);
        break;
      }
    }
  }
  return out;
}

}  // namespace sfmkit
