#pragma once

// Brute-force ground truth: exhaustive sub-pattern enumeration, exact sparsest
// and essential pattern families, and the decomposition-problem reduction.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sfmkit/analysis.hpp"
#include "sfmkit/error.hpp"
#include "sfmkit/graph.hpp"
#include "sfmkit/system.hpp"

namespace sfmkit {

inline constexpr std::size_t default_enumeration_cap = 20;
inline constexpr std::size_t default_dag_cap = 12;

enum class Criterion { condition_a, condition_b, feasible };

inline bool satisfies(const StructuralSystem& sys, const InformationPattern& k, Criterion criterion) {
  const SystemDigraph d = build_closed_loop_digraph(sys, k);
  switch (criterion) {
    case Criterion::condition_a: return check_condition_a(d).holds;
    case Criterion::condition_b: return check_condition_b(d).has_value();
    case Criterion::feasible: return check_condition_a(d).holds && check_condition_b(d).has_value();
  }
  return false;
}

namespace detail {

inline void require_cap(std::size_t entries, std::size_t cap) {
  if (entries > cap)
    throw CapExceeded("enumeration over " + std::to_string(entries) + " entries exceeds cap " + std::to_string(cap));
}

inline InformationPattern pattern_from_mask(std::size_t rows, std::size_t cols, std::span<const Entry> universe,
                                            std::uint64_t mask) {
  InformationPattern k(rows, cols);
  for (std::size_t b = 0; b < universe.size(); ++b)
    if (mask >> b & 1U) k.insert(universe[b]);
  return k;
}

// table[mask] = criterion holds for the sub-pattern selected by mask.
inline std::vector<char> criterion_table(const StructuralSystem& sys, std::span<const Entry> universe,
                                         Criterion criterion) {
  const std::uint64_t count = std::uint64_t{1} << universe.size();
  std::vector<char> table(count, 0);
  for (std::uint64_t mask = 0; mask < count; ++mask)
    table[mask] = satisfies(sys, pattern_from_mask(sys.p(), sys.m(), universe, mask), criterion);
  return table;
}

// below[mask] = some strict sub-mask is marked in `table`.
inline std::vector<char> strict_submask_marked(const std::vector<char>& table, std::size_t bits) {
  std::vector<char> below(table.size(), 0);
  for (std::uint64_t mask = 1; mask < table.size(); ++mask) {
    for (std::size_t b = 0; b < bits && !below[mask]; ++b) {
      if (!(mask >> b & 1U)) continue;
      const std::uint64_t sub = mask & ~(std::uint64_t{1} << b);
      below[mask] = table[sub] || below[sub];
    }
  }
  return below;
}

inline std::vector<Entry> all_entries(std::size_t rows, std::size_t cols) {
  const auto full = StructuralPattern::full(rows, cols);
  return {full.entries().begin(), full.entries().end()};
}

}  // namespace detail

/// Every sub-pattern of k_max (inclusive) that is feasible, sorted.
inline std::vector<InformationPattern> enumerate_feasible(const StructuralSystem& sys, const InformationPattern& k_max,
                                                          std::size_t cap = default_enumeration_cap) {
  require_compatible(sys, k_max);
  detail::require_cap(k_max.nonzero_count(), cap);
  const auto table = detail::criterion_table(sys, k_max.entries(), Criterion::feasible);
  std::vector<InformationPattern> out;
  for (std::uint64_t mask = 0; mask < table.size(); ++mask)
    if (table[mask]) out.push_back(detail::pattern_from_mask(sys.p(), sys.m(), k_max.entries(), mask));
  std::sort(out.begin(), out.end());
  return out;
}

struct SparsestResult {
  std::optional<std::size_t> count;  // nullopt: no pattern satisfies the criterion
  std::vector<InformationPattern> patterns;
};

/// Exact minimum nonzero count over all p x m patterns satisfying `criterion`,
/// with every pattern attaining it.
inline SparsestResult sparsest_bruteforce(const StructuralSystem& sys, Criterion criterion,
                                          std::size_t cap = default_enumeration_cap) {
  detail::require_cap(sys.p() * sys.m(), cap);
  const auto universe = detail::all_entries(sys.p(), sys.m());
  SparsestResult result;
  // Walk masks by popcount so the search stops at the first non-empty level.
  for (std::size_t level = 0; level <= universe.size(); ++level) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << universe.size()); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != level) continue;
      auto k = detail::pattern_from_mask(sys.p(), sys.m(), universe, mask);
      if (satisfies(sys, k, criterion)) result.patterns.push_back(std::move(k));
    }
    if (!result.patterns.empty()) {
      result.count = level;
      std::sort(result.patterns.begin(), result.patterns.end());
      break;
    }
  }
  return result;
}

inline SparsestResult sparsest_feasible_bruteforce(const StructuralSystem& sys,
                                                   std::size_t cap = default_enumeration_cap) {
  return sparsest_bruteforce(sys, Criterion::feasible, cap);
}

/// Minimal elements of the feasible family under the strict sub-pattern order.
/// Minimality is decided over all strict sub-patterns, not single deletions.
inline std::vector<InformationPattern> essential_bruteforce(const StructuralSystem& sys,
                                                            std::size_t cap = default_enumeration_cap) {
  detail::require_cap(sys.p() * sys.m(), cap);
  const auto universe = detail::all_entries(sys.p(), sys.m());
  const auto feasible = detail::criterion_table(sys, universe, Criterion::feasible);
  const auto below = detail::strict_submask_marked(feasible, universe.size());
  std::vector<InformationPattern> out;
  for (std::uint64_t mask = 0; mask < feasible.size(); ++mask)
    if (feasible[mask] && !below[mask]) out.push_back(detail::pattern_from_mask(sys.p(), sys.m(), universe, mask));
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Decomposition problem: split a DAG into blocks G1, G2 with no arc G2 -> G1,
// every vertex lying on a source-to-sink path inside its own block.

struct DagPartition {
  std::vector<Vertex> gamma1;
  std::vector<Vertex> gamma2;
  bool operator==(const DagPartition&) const = default;
};

inline bool is_acyclic(const Digraph& g) {
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (g.has_edge(v, v)) return false;
  return scc_decompose(g).scc_count() == g.vertex_count();
}

inline void require_acyclic(const Digraph& g) {
  if (!is_acyclic(g)) throw InvalidArgument("input digraph is not acyclic");
}

/// A(j, i) = 1 for every arc v_i -> v_j; B = C = I_n.
inline StructuralSystem reduce_decomposition(const Digraph& dag) {
  require_acyclic(dag);
  StructuralPattern a(dag.vertex_count(), dag.vertex_count());
  for (const Arc& arc : dag.edges()) a.insert({arc.head, arc.tail});
  return StructuralSystem::with_identity_io(std::move(a));
}

/// Checks both decomposition conditions and that the blocks partition V into
/// two non-empty sets.
inline bool is_valid_decomposition(const Digraph& dag, const DagPartition& part) {
  const std::size_t n = dag.vertex_count();
  if (part.gamma1.empty() || part.gamma2.empty() || part.gamma1.size() + part.gamma2.size() != n) return false;
  std::vector<int> block(n, 0);
  for (Vertex v : part.gamma1) {
    if (v >= n || block[v]) return false;
    block[v] = 1;
  }
  for (Vertex v : part.gamma2) {
    if (v >= n || block[v]) return false;
    block[v] = 2;
  }
  std::vector<char> has_in(n, 0);
  for (const Arc& a : dag.edges()) {
    if (block[a.tail] == 2 && block[a.head] == 1) return false;
    has_in[a.head] = 1;
  }
  // Within each block: reachable from a source of D and reaching a sink of D.
  const Digraph rev = dag.reversed();
  auto sweep = [&](const Digraph& g, auto is_seed) {
    std::vector<char> hit(n, 0);
    std::vector<Vertex> todo;
    for (Vertex v = 0; v < n; ++v)
      if (is_seed(v)) {
        hit[v] = 1;
        todo.push_back(v);
      }
    while (!todo.empty()) {
      const Vertex v = todo.back();
      todo.pop_back();
      for (Vertex w : g.successors(v))
        if (!hit[w] && block[w] == block[v]) {
          hit[w] = 1;
          todo.push_back(w);
        }
    }
    return hit;
  };
  const auto from_source = sweep(dag, [&](Vertex v) { return !has_in[v]; });
  const auto to_sink = sweep(rev, [&](Vertex v) { return dag.successors(v).empty(); });
  for (Vertex v = 0; v < n; ++v)
    if (!from_source[v] || !to_sink[v]) return false;
  return true;
}

inline constexpr std::uint64_t default_pattern_cap = std::uint64_t{1} << 24;

/// Solves the decomposition problem through information patterns: searches,
/// in order of increasing size, patterns K whose entries link sinks to sources
/// of the reduced system such that condition (a) holds and exactly two SCCs of
/// the closed loop contain states. Those two SCCs are the blocks.
///
/// Sizes run from max(S, T) (every source needs an incoming and every sink an
/// outgoing entry) to S + T - 2: a valid partition admits, per block, a
/// strongly connecting pattern of max(S_i, T_i) entries.
inline std::optional<DagPartition> solve_decomposition_via_patterns(const Digraph& dag,
                                                                    std::size_t vertex_cap = default_dag_cap,
                                                                    std::uint64_t pattern_cap = default_pattern_cap) {
  if (dag.vertex_count() > vertex_cap)
    throw CapExceeded("DAG with " + std::to_string(dag.vertex_count()) + " vertices exceeds cap " +
                      std::to_string(vertex_cap));
  const StructuralSystem sys = reduce_decomposition(dag);
  const std::size_t n = sys.n();
  if (n < 2) return std::nullopt;

  std::vector<char> has_in(n, 0);
  for (const Arc& a : dag.edges()) has_in[a.head] = 1;
  std::vector<Vertex> sources, sinks;
  for (Vertex v = 0; v < n; ++v) {
    if (!has_in[v]) sources.push_back(v);
    if (dag.successors(v).empty()) sinks.push_back(v);
  }
  std::vector<Entry> universe;  // K(source, sink) closes sink -> source
  std::vector<std::uint64_t> source_bits(n, 0), sink_bits(n, 0);
  for (Vertex s : sources)
    for (Vertex t : sinks) {
      if (universe.size() == 64) throw CapExceeded("more than 64 source/sink pairs");
      source_bits[s] |= std::uint64_t{1} << universe.size();
      sink_bits[t] |= std::uint64_t{1} << universe.size();
      universe.push_back({s, t});
    }
  const std::size_t lo = std::max(sources.size(), sinks.size());
  const std::size_t hi = std::min(universe.size(), sources.size() + sinks.size() - 2);
  if (lo > hi) return std::nullopt;
  std::uint64_t examined = 0;

  for (std::size_t level = lo; level <= hi; ++level) {
    const std::uint64_t last = universe.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << universe.size()) - 1;
    // Gosper's hack over all masks with `level` bits set.
    for (std::uint64_t mask = (std::uint64_t{1} << level) - 1; mask != 0 && mask <= last;) {
      if (++examined > pattern_cap)
        throw CapExceeded("decomposition search over " + std::to_string(universe.size()) +
                          " source/sink pairs examined more than " + std::to_string(pattern_cap) + " patterns");
      bool touches_all = true;
      for (Vertex s : sources) touches_all = touches_all && (mask & source_bits[s]);
      for (Vertex t : sinks) touches_all = touches_all && (mask & sink_bits[t]);
      if (touches_all) {
        const auto k = detail::pattern_from_mask(n, n, universe, mask);
        const SystemDigraph d = build_closed_loop_digraph(sys, k);
        const ConditionAReport rep = check_condition_a(d);
        if (rep.holds) {
          std::vector<std::size_t> state_sccs;
          for (std::size_t i = 0; i < n; ++i) state_sccs.push_back(rep.sccs.scc_of[d.state(i)]);
          std::sort(state_sccs.begin(), state_sccs.end());
          state_sccs.erase(std::unique(state_sccs.begin(), state_sccs.end()), state_sccs.end());
          if (state_sccs.size() == 2) {
            // Larger id = upstream (ids follow reverse topological order).
            DagPartition part;
            for (std::size_t i = 0; i < n; ++i)
              (rep.sccs.scc_of[d.state(i)] == state_sccs[1] ? part.gamma1 : part.gamma2).push_back(i);
            if (!is_valid_decomposition(dag, part))
              throw InternalError("pattern-derived partition violates the decomposition conditions");
            return part;
          }
        }
      }
      const std::uint64_t low = mask & (~mask + 1);
      const std::uint64_t ripple = mask + low;
      if (ripple == 0) break;  // overflow past bit 63
      mask = (((ripple ^ mask) >> 2) / low) | ripple;
    }
  }
  return std::nullopt;
}

}  // namespace sfmkit
