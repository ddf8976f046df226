#pragma once

// Independent reference implementations used only by tests. They work from the
// raw pattern entries on dense boolean matrices and deliberately share no code
// with the library's graph algorithms.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sfmkit/sfmkit.hpp"

namespace oracle {

using BoolMatrix = std::vector<std::vector<char>>;

/// Closed-loop adjacency: vertices x(0..n-1), u(n..n+p-1), y(n+p..n+p+m-1).
/// adj[from][to].
struct ClosedLoop {
  std::size_t n = 0, p = 0, m = 0;
  BoolMatrix adj;
  std::size_t size() const { return n + p + m; }
  std::size_t x(std::size_t i) const { return i; }
  std::size_t u(std::size_t i) const { return n + i; }
  std::size_t y(std::size_t i) const { return n + p + i; }
};

inline ClosedLoop closed_loop(const sfmkit::StructuralSystem& sys, const sfmkit::InformationPattern& k) {
  ClosedLoop g{sys.n(), sys.p(), sys.m(), {}};
  g.adj.assign(g.size(), std::vector<char>(g.size(), 0));
  for (std::size_t r = 0; r < sys.n(); ++r)
    for (std::size_t c = 0; c < sys.n(); ++c)
      if (sys.a().contains(r, c)) g.adj[g.x(c)][g.x(r)] = 1;
  for (std::size_t r = 0; r < sys.n(); ++r)
    for (std::size_t c = 0; c < sys.p(); ++c)
      if (sys.b().contains(r, c)) g.adj[g.u(c)][g.x(r)] = 1;
  for (std::size_t r = 0; r < sys.m(); ++r)
    for (std::size_t c = 0; c < sys.n(); ++c)
      if (sys.c().contains(r, c)) g.adj[g.x(c)][g.y(r)] = 1;
  for (std::size_t r = 0; r < sys.p(); ++r)
    for (std::size_t c = 0; c < sys.m(); ++c)
      if (k.contains(r, c)) g.adj[g.y(c)][g.u(r)] = 1;
  return g;
}

/// Reflexive-transitive closure (Warshall).
inline BoolMatrix closure(BoolMatrix r) {
  const std::size_t n = r.size();
  for (std::size_t i = 0; i < n; ++i) r[i][i] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (r[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (r[k][j]) r[i][j] = 1;
  return r;
}

inline BoolMatrix adjacency(const sfmkit::Digraph& g) {
  BoolMatrix adj(g.vertex_count(), std::vector<char>(g.vertex_count(), 0));
  for (const auto& a : g.edges()) adj[a.tail][a.head] = 1;
  return adj;
}

inline bool co_scc(const BoolMatrix& reach, std::size_t u, std::size_t v) { return reach[u][v] && reach[v][u]; }

/// States whose SCC contains no y -> u edge.
inline std::vector<std::size_t> condition_a_violations(const ClosedLoop& g) {
  const BoolMatrix reach = closure(g.adj);
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < g.n; ++i) {
    bool ok = false;
    for (std::size_t yo = 0; yo < g.m && !ok; ++yo)
      for (std::size_t ui = 0; ui < g.p && !ok; ++ui)
        ok = g.adj[g.y(yo)][g.u(ui)] && reach[g.x(i)][g.y(yo)] && reach[g.u(ui)][g.x(i)];
    if (!ok) bad.push_back(i);
  }
  return bad;
}

inline bool condition_a(const ClosedLoop& g) { return condition_a_violations(g).empty(); }

/// Backtracking search for a successor permutation: every state gets a
/// successor along an edge, successors are distinct, and u/y vertices may stay
/// out of the cover. Exponential; keep graphs small.
inline bool condition_b(const ClosedLoop& g) {
  const std::size_t v_count = g.size();
  std::vector<char> taken(v_count, 0);
  std::function<bool(std::size_t)> assign = [&](std::size_t v) -> bool {
    if (v == v_count) {
      // Each covered non-state vertex must also be entered, so in-degree = out-degree = 1.
      return true;
    }
    const bool is_state = v < g.n;
    for (std::size_t w = 0; w < v_count; ++w) {
      if (!g.adj[v][w] || taken[w]) continue;
      taken[w] = 1;
      if (assign(v + 1)) return true;
      taken[w] = 0;
    }
    // Optional vertex left out: it must not be used as anyone's successor,
    // which is enforced by reserving it.
    if (!is_state && !taken[v]) {
      taken[v] = 1;
      if (assign(v + 1)) return true;
      taken[v] = 0;
    }
    return false;
  };
  return assign(0);
}

inline bool feasible(const sfmkit::StructuralSystem& sys, const sfmkit::InformationPattern& k) {
  const ClosedLoop g = closed_loop(sys, k);
  return condition_a(g) && condition_b(g);
}

/// Maximum bipartite matching size by exhaustive recursion over left vertices.
inline std::size_t max_matching_size(const BoolMatrix& edge) {
  const std::size_t left = edge.size();
  const std::size_t right = left ? edge[0].size() : 0;
  std::vector<char> used(right, 0);
  std::function<std::size_t(std::size_t)> best = [&](std::size_t l) -> std::size_t {
    if (l == left) return 0;
    std::size_t out = best(l + 1);
    for (std::size_t r = 0; r < right; ++r) {
      if (!edge[l][r] || used[r]) continue;
      used[r] = 1;
      out = std::max(out, 1 + best(l + 1));
      used[r] = 0;
    }
    return out;
  };
  return best(0);
}

/// Checks a claimed condition-(b) witness directly against the digraph edges.
inline bool valid_cycle_family(const sfmkit::SystemDigraph& d, const sfmkit::CycleFamily& family) {
  const BoolMatrix adj = adjacency(d.graph());
  std::vector<char> seen(adj.size(), 0);
  for (const auto& cycle : family.cycles) {
    if (cycle.empty()) return false;
    for (std::size_t t = 0; t < cycle.size(); ++t) {
      const std::size_t v = cycle[t], w = cycle[(t + 1) % cycle.size()];
      if (v >= adj.size() || seen[v] || !adj[v][w]) return false;
      seen[v] = 1;
    }
  }
  for (std::size_t i = 0; i < d.state_count(); ++i)
    if (!seen[d.state(i)]) return false;
  return true;
}

/// Checks a condition-(a) report against a closure-based recomputation.
inline bool valid_condition_a_report(const sfmkit::SystemDigraph& d, const sfmkit::ConditionAReport& r) {
  const BoolMatrix adj = adjacency(d.graph());
  const BoolMatrix reach = closure(adj);
  const std::size_t v_count = adj.size();
  if (r.sccs.scc_of.size() != v_count) return false;
  for (std::size_t u = 0; u < v_count; ++u)
    for (std::size_t v = 0; v < v_count; ++v)
      if ((r.sccs.scc_of[u] == r.sccs.scc_of[v]) != co_scc(reach, u, v)) return false;
  std::vector<std::size_t> expected;
  for (std::size_t i = 0; i < d.state_count(); ++i) {
    bool ok = false;
    for (std::size_t yo = 0; yo < d.output_count() && !ok; ++yo)
      for (std::size_t ui = 0; ui < d.input_count() && !ok; ++ui) {
        const auto y = d.output(yo), u = d.input(ui), x = d.state(i);
        ok = adj[y][u] && co_scc(reach, x, y) && co_scc(reach, x, u);
      }
    if (!ok) expected.push_back(i);
  }
  if (expected != r.violating_states || r.holds != expected.empty()) return false;
  for (const auto& [scc, arcs] : r.scc_feedback_map)
    for (const auto& a : arcs)
      if (!adj[a.tail][a.head] || !d.is_feedback(a) || r.sccs.scc_of[a.tail] != scc || !co_scc(reach, a.tail, a.head))
        return false;
  return true;
}

// ---------------------------------------------------------------------------
// Decomposition problem by direct enumeration of 2-partitions.

inline bool partition_valid(const BoolMatrix& adj, const std::vector<int>& block) {
  const std::size_t n = adj.size();
  bool has1 = false, has2 = false;
  for (int b : block) (b == 1 ? has1 : has2) = true;
  if (!has1 || !has2) return false;
  std::vector<char> source(n, 1), sink(n, 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (adj[i][j]) {
        if (block[i] == 2 && block[j] == 1) return false;
        sink[i] = 0;
        source[j] = 0;
      }
  BoolMatrix inside(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inside[i][j] = adj[i][j] && block[i] == block[j];
  const BoolMatrix reach = closure(inside);
  for (std::size_t v = 0; v < n; ++v) {
    bool from = false, to = false;
    for (std::size_t s = 0; s < n; ++s) from = from || (source[s] && reach[s][v]);
    for (std::size_t t = 0; t < n; ++t) to = to || (sink[t] && reach[v][t]);
    if (!from || !to) return false;
  }
  return true;
}

inline bool partition_exists(const sfmkit::Digraph& dag) {
  const BoolMatrix adj = adjacency(dag);
  const std::size_t n = adj.size();
  for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
    std::vector<int> block(n);
    for (std::size_t v = 0; v < n; ++v) block[v] = (mask >> v & 1U) ? 2 : 1;
    if (partition_valid(adj, block)) return true;
  }
  return false;
}

inline bool partition_valid(const sfmkit::Digraph& dag, const sfmkit::DagPartition& part) {
  const std::size_t n = dag.vertex_count();
  std::vector<int> block(n, 0);
  for (auto v : part.gamma1) block.at(v) = 1;
  for (auto v : part.gamma2) {
    if (block.at(v) != 0) return false;
    block[v] = 2;
  }
  if (std::count(block.begin(), block.end(), 0) != 0) return false;
  return partition_valid(adjacency(dag), block);
}

// ---------------------------------------------------------------------------
// Random generators.

inline sfmkit::StructuralPattern random_pattern(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                                                double density) {
  std::bernoulli_distribution coin(density);
  sfmkit::StructuralPattern p(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (coin(rng)) p.insert({r, c});
  return p;
}

inline sfmkit::StructuralSystem random_identity_system(std::mt19937_64& rng, std::size_t n, double density) {
  return sfmkit::StructuralSystem::with_identity_io(random_pattern(rng, n, n, density));
}

inline sfmkit::StructuralSystem random_system(std::mt19937_64& rng, std::size_t n, std::size_t p, std::size_t m,
                                              double density) {
  return {random_pattern(rng, n, n, density), random_pattern(rng, n, p, density),
          random_pattern(rng, m, n, density)};
}

/// Random DAG: arcs only from lower to higher index of a random permutation.
inline sfmkit::Digraph random_dag(std::mt19937_64& rng, std::size_t n, double density) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::bernoulli_distribution coin(density);
  sfmkit::Digraph g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (coin(rng)) g.add_edge(order[i], order[j]);
  return g;
}

/// Strict-sub-pattern minimality by explicit enumeration of all sub-patterns.
inline bool minimal_feasible(const sfmkit::StructuralSystem& sys, const sfmkit::InformationPattern& k) {
  if (!feasible(sys, k)) return false;
  const auto entries = k.entries();
  const std::size_t e = entries.size();
  for (std::uint64_t mask = 0; mask + 1 < (std::uint64_t{1} << e); ++mask) {
    sfmkit::InformationPattern sub(k.rows(), k.cols());
    for (std::size_t b = 0; b < e; ++b)
      if (mask >> b & 1U) sub.insert(entries[b]);
    if (feasible(sys, sub)) return false;
  }
  return true;
}

}  // namespace oracle
