#pragma once

// Constructive information-pattern design for systems with B = C = I_n, and the
// two local transforms that turn one essential pattern into others.
//
// With B = C = I_n an entry K(r, c) closes the state-level arc x_c -> x_r
// (through y_c and u_r), so all constructions below reason on D(A) plus
// such "feedback arcs".

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sfmkit/analysis.hpp"
#include "sfmkit/error.hpp"
#include "sfmkit/graph.hpp"
#include "sfmkit/system.hpp"

namespace sfmkit {

using IndexPair = std::pair<std::size_t, std::size_t>;

/// A maximum matching of the complete bipartite graph I x J.
struct IndexPairing {
  std::vector<IndexPair> pairs;
};

/// Edges closing a matching into a single alternating cycle.
struct SequentialPairing {
  std::vector<IndexPair> pairs;  // (I-side, J-side)
};

/// Pairs sorted(set_i)[t] with sorted(set_j)[t] for t < min(|I|, |J|).
inline IndexPairing index_pairing(std::span<const std::size_t> set_i, std::span<const std::size_t> set_j) {
  std::vector<std::size_t> si(set_i.begin(), set_i.end()), sj(set_j.begin(), set_j.end());
  std::sort(si.begin(), si.end());
  std::sort(sj.begin(), sj.end());
  if (std::adjacent_find(si.begin(), si.end()) != si.end() || std::adjacent_find(sj.begin(), sj.end()) != sj.end())
    throw InvalidArgument("index sets must not contain duplicates");
  IndexPairing out;
  for (std::size_t t = 0; t < std::min(si.size(), sj.size()); ++t) out.pairs.emplace_back(si[t], sj[t]);
  return out;
}

/// For matching edges (j_l, i_l), l = 1..k ordered by left endpoint, returns
/// {(i_l, j_{l-1}) : l = 2..k} u {(i_1, j_k)}.
inline SequentialPairing sequential_pairing(const Matching& m) {
  const auto edges = m.edges();
  if (edges.empty()) throw InvalidArgument("sequential pairing needs a non-empty matching");
  SequentialPairing out;
  for (std::size_t l = 1; l < edges.size(); ++l) out.pairs.emplace_back(edges[l].right, edges[l - 1].left);
  out.pairs.emplace_back(edges.front().right, edges.back().left);
  return out;
}

/// Condition-(b) pattern from a matching of B(A): links every left-unmatched
/// state (path end) to a right-unmatched state (path start) by index pairing.
inline InformationPattern design_condition_b(const StructuralPattern& a, const Matching& m) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw DimensionError("A must be square, got " + a.shape_string());
  if (m.left_count() != n || m.right_count() != n)
    throw DimensionError("matching is not over B(A) for n = " + std::to_string(n));
  for (const auto& e : m.edges())
    if (!a.contains(e.right, e.left))
      throw InvalidArgument("matching edge (x" + std::to_string(e.left + 1) + ",x" + std::to_string(e.right + 1) +
                            ") is not a state arc");
  const auto starts = m.right_unmatched();
  const auto ends = m.left_unmatched();
  InformationPattern k(n, n);
  for (const auto& [r, c] : index_pairing(starts, ends).pairs) k.insert({r, c});
  return k;
}

inline InformationPattern design_condition_b_sparsest(const StructuralPattern& a) {
  const auto sys = StructuralSystem::with_identity_io(a);
  return design_condition_b(a, max_matching(state_bipartite_graph(sys)));
}

namespace detail {

inline Digraph with_feedback_arcs(const StructuralPattern& a, const InformationPattern& k) {
  Digraph g = state_digraph(a);
  for (const Entry& e : k.entries()) g.add_edge(e.col, e.row);
  return g;
}

inline std::vector<std::size_t> by_representative(const CondensationDag& dag, std::vector<std::size_t> ids) {
  std::sort(ids.begin(), ids.end(),
            [&](std::size_t x, std::size_t y) { return dag.representative(x) < dag.representative(y); });
  return ids;
}

// Adds K(rep(top), rep(bottom)) for every pair of the sequential pairing of `m`,
// where left vertices of `m` index `tops` and right vertices index `bottoms`.
inline void close_matched_sccs(const CondensationDag& dag, const Matching& m, std::span<const std::size_t> tops,
                               std::span<const std::size_t> bottoms, InformationPattern& k) {
  for (const auto& [b, t] : sequential_pairing(m).pairs)
    k.insert({dag.representative(tops[t]), dag.representative(bottoms[b])});
}

// Sparsest condition-(a) pattern when beta_T <= beta_B.
inline InformationPattern condition_a_sources_first(const StructuralPattern& a) {
  const std::size_t n = a.rows();
  InformationPattern k(n, n);
  const CondensationDag dag = scc_decompose(state_digraph(a));
  const auto tops = by_representative(dag, dag.non_top);
  const auto bottoms = by_representative(dag, dag.non_bottom);
  const std::size_t target = std::max(tops.size(), bottoms.size());

  // Phase 1: match non-top to reachable non-bottom SCCs and close them into one cycle.
  const Matching first = max_matching(scc_reachability(dag, tops, bottoms));
  close_matched_sccs(dag, first, tops, bottoms, k);

  // Phase 2: unmatched non-top SCCs reach every unmatched non-bottom SCC through
  // the cycle just built; a second pairing absorbs them.
  std::vector<std::size_t> rest_bottoms;
  for (std::size_t b : first.right_unmatched()) rest_bottoms.push_back(bottoms[b]);
  if (const auto left_over = first.left_unmatched(); !left_over.empty()) {
    std::vector<std::size_t> rest_tops;
    for (std::size_t t : left_over) rest_tops.push_back(tops[t]);
    const CondensationDag closed = scc_decompose(with_feedback_arcs(a, k));
    auto to_closed = [&](std::span<const std::size_t> ids) {
      std::vector<std::size_t> out;
      for (std::size_t id : ids) out.push_back(closed.scc_of[dag.representative(id)]);
      return out;
    };
    const Matching second = max_matching(scc_reachability(closed, to_closed(rest_tops), to_closed(rest_bottoms)));
    if (second.size() != rest_tops.size())
      throw InternalError("second pairing round left " + std::to_string(rest_tops.size() - second.size()) +
                          " non-top SCCs unmatched");
    close_matched_sccs(dag, second, rest_tops, rest_bottoms, k);
    std::vector<std::size_t> still_open;
    for (std::size_t b : second.right_unmatched()) still_open.push_back(rest_bottoms[b]);
    rest_bottoms = std::move(still_open);
  }

  // Phase 3: the loop now has a unique non-top SCC; link each remaining
  // non-bottom SCC back into it.
  const CondensationDag merged = scc_decompose(with_feedback_arcs(a, k));
  if (merged.beta_top() != 1)
    throw InternalError("expected a unique non-top SCC, found " + std::to_string(merged.beta_top()));
  const Vertex hub = merged.representative(merged.non_top.front());
  for (std::size_t id : rest_bottoms) k.insert({hub, dag.representative(id)});

  if (k.nonzero_count() != target || scc_decompose(with_feedback_arcs(a, k)).scc_count() != 1)
    throw InternalError("condition-(a) construction produced " + std::to_string(k.nonzero_count()) +
                        " entries, expected " + std::to_string(target));
  return k;
}

}  // namespace detail

/// Sparsest pattern satisfying condition (a) for B = C = I_n: exactly
/// max(beta_T, beta_B) entries, and the closed loop is strongly connected.
/// SCC representatives are the smallest state index of each SCC.
inline InformationPattern design_condition_a_sparsest(const StructuralPattern& a) {
  if (a.rows() != a.cols()) throw DimensionError("A must be square, got " + a.shape_string());
  if (a.rows() == 0) return InformationPattern(0, 0);
  const CondensationDag dag = scc_decompose(state_digraph(a));
  if (dag.beta_top() <= dag.beta_bottom()) return detail::condition_a_sources_first(a);
  // Reversing every arc swaps sources and sinks; K transposes accordingly.
  return detail::condition_a_sources_first(a.transposed()).transposed();
}

/// Union of the two sparsest single-condition patterns, greedily pruned in
/// row-major order (restarting after every deletion) while feasibility holds.
inline InformationPattern design_feasible_essential(const StructuralPattern& a) {
  const auto sys = StructuralSystem::with_identity_io(a);
  InformationPattern k = pattern_sum(design_condition_a_sparsest(a), design_condition_b_sparsest(a));
  bool pruned = true;
  while (pruned) {
    pruned = false;
    for (const Entry& e : k.entries()) {
      InformationPattern candidate = k.without(e);
      if (is_feasible(sys, candidate)) {
        k = std::move(candidate);
        pruned = true;
        break;
      }
    }
  }
  if (!is_essential(sys, k).essential) throw InternalError("pruned pattern failed essentiality certification");
  return k;
}

class TransformError : public InvalidArgument {
 public:
  enum class Reason {
    not_identity_io,
    entry_absent,
    not_co_scc,
    condition_a_fails,
    invalid_cycle,
    invalid_position,
    not_in_witness,
  };
  TransformError(Reason reason, const std::string& what) : InvalidArgument(what), reason_(reason) {}
  Reason reason() const { return reason_; }

 private:
  Reason reason_;
};

/// Replaces K(i, j) by K(i2, j) and K(i, j2). Requires x_i2 and x_j2 to share
/// an SCC of the state digraph D(A); condition (a) is then preserved.
inline InformationPattern bisect_feedback(const StructuralSystem& sys, const InformationPattern& k, std::size_t i,
                                          std::size_t j, std::size_t i2, std::size_t j2) {
  using R = TransformError::Reason;
  if (!sys.has_identity_io()) throw TransformError(R::not_identity_io, "bisect requires B = C = identity");
  require_compatible(sys, k);
  if (!k.contains(i, j))
    throw TransformError(R::entry_absent, "K(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") is zero");
  const std::size_t n = sys.n();
  if (i2 >= n || j2 >= n) throw TransformError(R::not_co_scc, "replacement indices out of range");
  if (!scc_decompose(state_digraph(sys.a())).same_scc(i2, j2))
    throw TransformError(R::not_co_scc, "x" + std::to_string(i2 + 1) + " and x" + std::to_string(j2 + 1) +
                                            " are not in the same SCC of the state digraph");
  if (!check_condition_a(sys, k).holds)
    throw TransformError(R::condition_a_fails, "input pattern does not satisfy condition (a)");
  InformationPattern out = k.without({i, j});
  out.insert({i2, j});
  out.insert({i, j2});
  return out;
}

enum class SplitVariant {
  proof,      // second sub-cycle closed by K(i_{l+1}, i_k)
  statement,  // K(i_{l+1}, i_l); may leave x_{i_{l+1}}..x_{i_k} uncovered
};

/// Splits the feedback cycle u_{i1} x_{i1} .. x_{ik} y_{ik} u_{i1} after its
/// l-th state (1 <= l < k): drops K(i1, ik) and adds K(i1, il) plus the entry
/// selected by `variant`. `cycle` lists the state indices i1..ik.
inline InformationPattern split_cycle(const StructuralSystem& sys, const InformationPattern& k,
                                      std::span<const std::size_t> cycle, std::size_t l,
                                      SplitVariant variant = SplitVariant::proof) {
  using R = TransformError::Reason;
  if (!sys.has_identity_io()) throw TransformError(R::not_identity_io, "split requires B = C = identity");
  require_compatible(sys, k);
  const std::size_t len = cycle.size();
  if (len < 2 || l < 1 || l >= len)
    throw TransformError(R::invalid_position, "split position " + std::to_string(l) + " invalid for a cycle of " +
                                                  std::to_string(len) + " states");
  std::vector<char> used(sys.n(), 0);
  for (std::size_t t = 0; t < len; ++t) {
    if (cycle[t] >= sys.n() || used[cycle[t]]) throw TransformError(R::invalid_cycle, "cycle states must be distinct and in range");
    used[cycle[t]] = 1;
    if (t + 1 < len && !sys.a().contains(cycle[t + 1], cycle[t]))
      throw TransformError(R::invalid_cycle, "missing state arc x" + std::to_string(cycle[t] + 1) + " -> x" +
                                                 std::to_string(cycle[t + 1] + 1));
  }
  const std::size_t first = cycle.front(), last = cycle.back();
  if (!k.contains(first, last))
    throw TransformError(R::invalid_cycle, "cycle is not closed by K(" + std::to_string(first + 1) + "," +
                                               std::to_string(last + 1) + ")");

  // The rest of the states must be coverable disjointly from this cycle.
  const SystemDigraph d = build_closed_loop_digraph(sys, k);
  std::vector<CoverRole> roles(d.graph().vertex_count(), CoverRole::optional);
  for (std::size_t s = 0; s < sys.n(); ++s) roles[d.state(s)] = used[s] ? CoverRole::excluded : CoverRole::required;
  roles[d.input(first)] = CoverRole::excluded;
  roles[d.output(last)] = CoverRole::excluded;
  if (!find_disjoint_cycle_cover(d.graph(), roles))
    throw TransformError(R::not_in_witness, "no condition-(b) cycle family contains the given cycle");

  InformationPattern out = k.without({first, last});
  out.insert({first, cycle[l - 1]});
  if (variant == SplitVariant::proof) {
    out.insert({cycle[l], last});
  } else {
    out.insert({cycle[l], cycle[l - 1]});
  }
  return out;
}

/// State indices i1..ik of a cycle shaped u_{i1} x_{i1} .. x_{ik} y_{ik} u_{i1}
/// (exactly one feedback edge), or nullopt for any other cycle.
inline std::optional<std::vector<std::size_t>> single_feedback_cycle_states(const SystemDigraph& d,
                                                                            std::span<const Vertex> cycle) {
  std::size_t input_pos = npos, inputs = 0, outputs = 0;
  for (std::size_t t = 0; t < cycle.size(); ++t) {
    const VertexKind kind = d.kind(cycle[t]);
    if (kind == VertexKind::input) {
      ++inputs;
      input_pos = t;
    } else if (kind == VertexKind::output) {
      ++outputs;
    }
  }
  if (inputs != 1 || outputs != 1) return std::nullopt;
  std::vector<std::size_t> states;
  for (std::size_t t = 1; t + 1 < cycle.size(); ++t) {
    const Vertex v = cycle[(input_pos + t) % cycle.size()];
    if (d.kind(v) != VertexKind::state) return std::nullopt;
    states.push_back(d.local_index(v));
  }
  if (states.empty()) return std::nullopt;
  return states;
}

/// Closure of `seed` under bisect_feedback and split_cycle up to `depth`
/// rounds, keeping only candidates certified essential. Sorted, deduplicated.
inline std::vector<InformationPattern> enumerate_essential_family(const StructuralSystem& sys,
                                                                  const InformationPattern& seed,
                                                                  std::size_t depth) {
  require_identity_io(sys);
  if (!is_essential(sys, seed).essential) throw InvalidArgument("seed pattern is not essential");

  const CondensationDag state_sccs = scc_decompose(state_digraph(sys.a()));
  std::set<InformationPattern> family{seed};
  std::vector<InformationPattern> frontier{seed};

  for (std::size_t round = 0; round < depth && !frontier.empty(); ++round) {
    std::set<InformationPattern> candidates;
    for (const auto& k : frontier) {
      for (const Entry& e : k.entries())
        for (const auto& members : state_sccs.members)
          for (std::size_t i2 : members)
            for (std::size_t j2 : members) candidates.insert(bisect_feedback(sys, k, e.row, e.col, i2, j2));

      const SystemDigraph d = build_closed_loop_digraph(sys, k);
      if (const auto witness = check_condition_b(d)) {
        for (const auto& cycle : witness->cycles) {
          const auto states = single_feedback_cycle_states(d, cycle);
          if (!states || states->size() < 2) continue;
          for (std::size_t l = 1; l < states->size(); ++l) candidates.insert(split_cycle(sys, k, *states, l));
        }
      }
    }
    std::vector<InformationPattern> next;
    for (const auto& c : candidates) {
      if (family.contains(c) || !is_essential(sys, c).essential) continue;
      family.insert(c);
      next.push_back(c);
    }
    frontier = std::move(next);
  }
  return {family.begin(), family.end()};
}

}  // namespace sfmkit
