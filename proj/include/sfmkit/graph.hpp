#pragma once

// Digraph and bipartite-graph primitives: Tarjan SCCs with condensation
// classification, Hopcroft-Karp maximum matching, and the decomposition of a
// state-graph matching into vertex-disjoint paths and cycles.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sfmkit/error.hpp"

namespace sfmkit {

using Vertex = std::size_t;

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

struct Arc {
  Vertex tail = 0;
  Vertex head = 0;
  auto operator<=>(const Arc&) const = default;
};

/// Directed graph on vertices 0..n-1 with set semantics on edges.
class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(std::size_t vertex_count) : out_(vertex_count) {}
  Digraph(std::size_t vertex_count, std::span<const Arc> arcs) : out_(vertex_count) {
    for (const Arc& a : arcs) add_edge(a.tail, a.head);
  }

  std::size_t vertex_count() const { return out_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  /// Returns false when the edge was already present.
  bool add_edge(Vertex tail, Vertex head) {
    check_vertex(tail);
    check_vertex(head);
    auto& adj = out_[tail];
    auto it = std::lower_bound(adj.begin(), adj.end(), head);
    if (it != adj.end() && *it == head) return false;
    adj.insert(it, head);
    ++edge_count_;
    return true;
  }

  bool has_edge(Vertex tail, Vertex head) const {
    if (tail >= out_.size() || head >= out_.size()) return false;
    return std::binary_search(out_[tail].begin(), out_[tail].end(), head);
  }

  /// Sorted ascending.
  std::span<const Vertex> successors(Vertex v) const {
    check_vertex(v);
    return out_[v];
  }

  std::vector<Arc> edges() const {
    std::vector<Arc> result;
    result.reserve(edge_count_);
    for (Vertex t = 0; t < out_.size(); ++t)
      for (Vertex h : out_[t]) result.push_back({t, h});
    return result;
  }

  Digraph reversed() const {
    Digraph r(vertex_count());
    for (Vertex t = 0; t < out_.size(); ++t)
      for (Vertex h : out_[t]) r.add_edge(h, t);
    return r;
  }

  bool operator==(const Digraph&) const = default;

 private:
  void check_vertex(Vertex v) const {
    if (v >= out_.size())
      throw InvalidArgument("vertex " + std::to_string(v) + " out of range for digraph with " +
                            std::to_string(out_.size()) + " vertices");
  }

  std::vector<std::vector<Vertex>> out_;
  std::size_t edge_count_ = 0;
};

struct BipartiteEdge {
  std::size_t left = 0;
  std::size_t right = 0;
  auto operator<=>(const BipartiteEdge&) const = default;
};

/// Bipartite graph with left vertices 0..L-1 and right vertices 0..R-1.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;
  BipartiteGraph(std::size_t left_count, std::size_t right_count)
      : right_count_(right_count), adj_(left_count) {}

  std::size_t left_count() const { return adj_.size(); }
  std::size_t right_count() const { return right_count_; }
  std::size_t edge_count() const { return edge_count_; }

  bool add_edge(std::size_t left, std::size_t right) {
    if (left >= adj_.size() || right >= right_count_)
      throw InvalidArgument("bipartite edge (" + std::to_string(left) + "," + std::to_string(right) +
                            ") outside " + std::to_string(adj_.size()) + "x" +
                            std::to_string(right_count_));
    auto& nb = adj_[left];
    auto it = std::lower_bound(nb.begin(), nb.end(), right);
    if (it != nb.end() && *it == right) return false;
    nb.insert(it, right);
    ++edge_count_;
    return true;
  }

  bool has_edge(std::size_t left, std::size_t right) const {
    return left < adj_.size() && std::binary_search(adj_[left].begin(), adj_[left].end(), right);
  }

  std::span<const std::size_t> neighbors(std::size_t left) const { return adj_.at(left); }

  std::vector<BipartiteEdge> edges() const {
    std::vector<BipartiteEdge> result;
    for (std::size_t l = 0; l < adj_.size(); ++l)
      for (std::size_t r : adj_[l]) result.push_back({l, r});
    return result;
  }

 private:
  std::size_t right_count_ = 0;
  std::vector<std::vector<std::size_t>> adj_;
  std::size_t edge_count_ = 0;
};

/// A set of vertex-disjoint bipartite edges. Unmatched sets are derived, so
/// they can never disagree with the edge set.
class Matching {
 public:
  Matching() = default;
  Matching(std::size_t left_count, std::size_t right_count)
      : left_mate_(left_count, npos), right_mate_(right_count, npos) {}

  static Matching from_edges(std::size_t left_count, std::size_t right_count,
                             std::span<const BipartiteEdge> edges) {
    Matching m(left_count, right_count);
    for (const auto& e : edges) m.match(e.left, e.right);
    return m;
  }

  void match(std::size_t left, std::size_t right) {
    if (left >= left_mate_.size() || right >= right_mate_.size())
      throw InvalidArgument("matching edge (" + std::to_string(left) + "," + std::to_string(right) +
                            ") out of range");
    if (left_mate_[left] != npos || right_mate_[right] != npos)
      throw InvalidArgument("matching edges share an endpoint at (" + std::to_string(left) + "," +
                            std::to_string(right) + ")");
    left_mate_[left] = right;
    right_mate_[right] = left;
    ++size_;
  }

  std::size_t left_count() const { return left_mate_.size(); }
  std::size_t right_count() const { return right_mate_.size(); }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  std::optional<std::size_t> mate_of_left(std::size_t l) const {
    std::size_t r = left_mate_.at(l);
    return r == npos ? std::nullopt : std::optional(r);
  }
  std::optional<std::size_t> mate_of_right(std::size_t r) const {
    std::size_t l = right_mate_.at(r);
    return l == npos ? std::nullopt : std::optional(l);
  }

  /// Ordered by left endpoint.
  std::vector<BipartiteEdge> edges() const {
    std::vector<BipartiteEdge> result;
    result.reserve(size_);
    for (std::size_t l = 0; l < left_mate_.size(); ++l)
      if (left_mate_[l] != npos) result.push_back({l, left_mate_[l]});
    return result;
  }

  std::vector<std::size_t> left_unmatched() const { return unmatched(left_mate_); }
  std::vector<std::size_t> right_unmatched() const { return unmatched(right_mate_); }

  bool operator==(const Matching&) const = default;

 private:
  static std::vector<std::size_t> unmatched(const std::vector<std::size_t>& mate) {
    std::vector<std::size_t> result;
    for (std::size_t v = 0; v < mate.size(); ++v)
      if (mate[v] == npos) result.push_back(v);
    return result;
  }

  std::vector<std::size_t> left_mate_;
  std::vector<std::size_t> right_mate_;
  std::size_t size_ = 0;
};

/// SCC partition of a digraph together with its quotient DAG.
///
/// SCC ids follow reverse topological order of the condensation: id 0 is a
/// sink, and every DAG edge goes from a larger id to a smaller one.
struct CondensationDag {
  std::vector<std::size_t> scc_of;                 // vertex -> scc id
  std::vector<std::vector<Vertex>> members;        // scc id -> sorted vertices
  std::vector<std::vector<std::size_t>> successors;  // sorted, no self loops
  std::vector<std::size_t> non_top;                // no incoming dag edge
  std::vector<std::size_t> non_bottom;             // no outgoing dag edge

  std::size_t scc_count() const { return members.size(); }
  std::size_t beta_top() const { return non_top.size(); }
  std::size_t beta_bottom() const { return non_bottom.size(); }
  bool same_scc(Vertex u, Vertex v) const { return scc_of.at(u) == scc_of.at(v); }
  /// Smallest vertex of the component.
  Vertex representative(std::size_t scc) const { return members.at(scc).front(); }
};

/// Iterative Tarjan, O(|V| + |E|).
inline CondensationDag scc_decompose(const Digraph& g) {
  const std::size_t n = g.vertex_count();
  CondensationDag dag;
  dag.scc_of.assign(n, npos);

  std::vector<std::size_t> index(n, npos), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<Vertex> stack;
  std::vector<std::pair<Vertex, std::size_t>> frames;  // vertex, next successor slot
  std::size_t counter = 0;

  auto open = [&](Vertex v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = 1;
    frames.emplace_back(v, 0);
  };

  for (Vertex root = 0; root < n; ++root) {
    if (index[root] != npos) continue;
    open(root);
    while (!frames.empty()) {
      const Vertex v = frames.back().first;
      const auto succ = g.successors(v);
      std::size_t& slot = frames.back().second;
      if (slot < succ.size()) {
        const Vertex w = succ[slot++];
        if (index[w] == npos) {
          open(w);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      frames.pop_back();
      if (!frames.empty()) {
        const Vertex parent = frames.back().first;
        low[parent] = std::min(low[parent], low[v]);
      }
      if (low[v] == index[v]) {
        const std::size_t id = dag.members.size();
        std::vector<Vertex> comp;
        Vertex w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          dag.scc_of[w] = id;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        dag.members.push_back(std::move(comp));
      }
    }
  }

  const std::size_t k = dag.members.size();
  dag.successors.assign(k, {});
  std::vector<char> has_in(k, 0);
  for (Vertex t = 0; t < n; ++t) {
    for (Vertex h : g.successors(t)) {
      const std::size_t a = dag.scc_of[t], b = dag.scc_of[h];
      if (a == b) continue;
      dag.successors[a].push_back(b);
      has_in[b] = 1;
    }
  }
  for (auto& s : dag.successors) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (!has_in[c]) dag.non_top.push_back(c);
    if (dag.successors[c].empty()) dag.non_bottom.push_back(c);
  }
  return dag;
}

namespace detail {

struct HopcroftKarp {
  const BipartiteGraph& g;
  std::vector<std::size_t> left_mate, right_mate, dist;

  explicit HopcroftKarp(const BipartiteGraph& graph)
      : g(graph),
        left_mate(graph.left_count(), npos),
        right_mate(graph.right_count(), npos),
        dist(graph.left_count(), npos) {}

  bool bfs() {
    std::queue<std::size_t> q;
    for (std::size_t l = 0; l < left_mate.size(); ++l) {
      if (left_mate[l] == npos) {
        dist[l] = 0;
        q.push(l);
      } else {
        dist[l] = npos;
      }
    }
    bool found = false;
    while (!q.empty()) {
      const std::size_t l = q.front();
      q.pop();
      for (std::size_t r : g.neighbors(l)) {
        const std::size_t next = right_mate[r];
        if (next == npos) {
          found = true;
        } else if (dist[next] == npos) {
          dist[next] = dist[l] + 1;
          q.push(next);
        }
      }
    }
    return found;
  }

  bool dfs(std::size_t l) {
    for (std::size_t r : g.neighbors(l)) {
      const std::size_t next = right_mate[r];
      if (next == npos || (dist[next] == dist[l] + 1 && dfs(next))) {
        left_mate[l] = r;
        right_mate[r] = l;
        return true;
      }
    }
    dist[l] = npos;
    return false;
  }

  Matching run() {
    while (bfs()) {
      for (std::size_t l = 0; l < left_mate.size(); ++l)
        if (left_mate[l] == npos) dfs(l);
    }
    Matching m(g.left_count(), g.right_count());
    for (std::size_t l = 0; l < left_mate.size(); ++l)
      if (left_mate[l] != npos) m.match(l, left_mate[l]);
    return m;
  }
};

}  // namespace detail

/// Hopcroft-Karp. Left vertices and neighbor lists are scanned in ascending
/// order, so the result is deterministic for a given graph.
inline Matching max_matching(const BipartiteGraph& b) { return detail::HopcroftKarp(b).run(); }

/// Bipartite graph associated with a digraph: edge (t, h) for every arc t -> h.
inline BipartiteGraph associated_bipartite(const Digraph& g) {
  BipartiteGraph b(g.vertex_count(), g.vertex_count());
  for (const Arc& a : g.edges()) b.add_edge(a.tail, a.head);
  return b;
}

struct PathCycleDecomposition {
  std::vector<std::vector<Vertex>> cycles;
  std::vector<std::vector<Vertex>> paths;  // an isolated vertex is a one-vertex path
};

/// Splits the arcs selected by `m` (left = tail, right = head) into disjoint
/// cycles and elementary paths covering every vertex of `state_graph`. Paths
/// run from right-unmatched to left-unmatched vertices.
inline PathCycleDecomposition matching_decomposition(const Digraph& state_graph, const Matching& m) {
  const std::size_t n = state_graph.vertex_count();
  if (m.left_count() != n || m.right_count() != n)
    throw DimensionError("matching is not over the bipartite graph of a " + std::to_string(n) +
                         "-vertex digraph");
  std::vector<Vertex> next(n, npos);
  for (const auto& e : m.edges()) {
    if (!state_graph.has_edge(e.left, e.right))
      throw InvalidArgument("matching edge (" + std::to_string(e.left) + "," +
                            std::to_string(e.right) + ") is not an edge of the digraph");
    next[e.left] = e.right;
  }

  PathCycleDecomposition out;
  std::vector<char> seen(n, 0);
  for (Vertex start : m.right_unmatched()) {
    std::vector<Vertex> path;
    for (Vertex v = start; v != npos; v = next[v]) {
      path.push_back(v);
      seen[v] = 1;
    }
    out.paths.push_back(std::move(path));
  }
  for (Vertex start = 0; start < n; ++start) {
    if (seen[start]) continue;
    std::vector<Vertex> cycle;
    Vertex v = start;
    do {
      cycle.push_back(v);
      seen[v] = 1;
      v = next[v];
    } while (v != start);
    out.cycles.push_back(std::move(cycle));
  }
  return out;
}

/// Reachability between two lists of SCC ids of `dag`. Left vertex t stands for
/// sources[t], right vertex s for targets[s]; an SCC reaches itself.
inline BipartiteGraph scc_reachability(const CondensationDag& dag, std::span<const std::size_t> sources,
                                       std::span<const std::size_t> targets) {
  const std::size_t k = dag.scc_count();
  for (std::size_t id : sources)
    if (id >= k) throw InvalidArgument("source scc id " + std::to_string(id) + " out of range");
  std::vector<std::size_t> target_slot(k, npos);
  for (std::size_t s = 0; s < targets.size(); ++s) {
    if (targets[s] >= k) throw InvalidArgument("target scc id " + std::to_string(targets[s]) + " out of range");
    target_slot[targets[s]] = s;
  }

  BipartiteGraph b(sources.size(), targets.size());
  std::vector<std::size_t> mark(k, npos);
  std::vector<std::size_t> todo;
  for (std::size_t t = 0; t < sources.size(); ++t) {
    todo.assign(1, sources[t]);
    mark[sources[t]] = t;
    while (!todo.empty()) {
      const std::size_t c = todo.back();
      todo.pop_back();
      if (target_slot[c] != npos) {
        // duplicates in `targets` share one slot; add every matching position
        for (std::size_t s = 0; s < targets.size(); ++s)
          if (targets[s] == c) b.add_edge(t, s);
      }
      for (std::size_t d : dag.successors[c]) {
        if (mark[d] == t) continue;
        mark[d] = t;
        todo.push_back(d);
      }
    }
  }
  return b;
}

}  // namespace sfmkit
