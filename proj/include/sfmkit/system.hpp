#pragma once

// Structural patterns, structural systems, and the digraphs built from them.
//
// Index conventions (0-based internally):
//   A(r, c) != 0  <=>  state arc   x_c -> x_r
//   B(r, c) != 0  <=>  input arc   u_c -> x_r
//   C(r, c) != 0  <=>  output arc  x_c -> y_r
//   K(r, c) != 0  <=>  feedback    y_c -> u_r

#include <algorithm>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sfmkit/error.hpp"
#include "sfmkit/graph.hpp"

namespace sfmkit {

struct Entry {
  std::size_t row = 0;
  std::size_t col = 0;
  auto operator<=>(const Entry&) const = default;
};

/// Binary sparsity pattern stored as a sorted set of nonzero coordinates.
class StructuralPattern {
 public:
  StructuralPattern() = default;
  StructuralPattern(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}
  StructuralPattern(std::size_t rows, std::size_t cols, std::initializer_list<Entry> entries)
      : StructuralPattern(rows, cols, std::span<const Entry>(entries.begin(), entries.size())) {}
  StructuralPattern(std::size_t rows, std::size_t cols, std::span<const Entry> entries)
      : rows_(rows), cols_(cols) {
    for (const Entry& e : entries) insert(e);
  }

  static StructuralPattern identity(std::size_t n) {
    StructuralPattern p(n, n);
    for (std::size_t i = 0; i < n; ++i) p.entries_.push_back({i, i});
    return p;
  }

  static StructuralPattern full(std::size_t rows, std::size_t cols) {
    StructuralPattern p(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) p.entries_.push_back({r, c});
    return p;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nonzero_count() const { return entries_.size(); }
  bool is_zero() const { return entries_.empty(); }
  bool same_shape(const StructuralPattern& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  /// Row-major order. Temporaries hand over their storage so range-for over
  /// `make().entries()` stays valid.
  std::span<const Entry> entries() const& { return entries_; }
  std::vector<Entry> entries() && { return std::move(entries_); }

  bool contains(Entry e) const { return std::binary_search(entries_.begin(), entries_.end(), e); }
  bool contains(std::size_t row, std::size_t col) const { return contains(Entry{row, col}); }

  /// Returns false if already present.
  bool insert(Entry e) {
    if (e.row >= rows_ || e.col >= cols_)
      throw DimensionError("entry (" + std::to_string(e.row) + "," + std::to_string(e.col) +
                           ") outside " + shape_string());
    auto it = std::lower_bound(entries_.begin(), entries_.end(), e);
    if (it != entries_.end() && *it == e) return false;
    entries_.insert(it, e);
    return true;
  }

  bool erase(Entry e) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), e);
    if (it == entries_.end() || *it != e) return false;
    entries_.erase(it);
    return true;
  }

  StructuralPattern with(Entry e) const {
    StructuralPattern p = *this;
    p.insert(e);
    return p;
  }

  StructuralPattern without(Entry e) const {
    StructuralPattern p = *this;
    p.erase(e);
    return p;
  }

  StructuralPattern transposed() const {
    StructuralPattern p(cols_, rows_);
    for (const Entry& e : entries_) p.entries_.push_back({e.col, e.row});
    std::sort(p.entries_.begin(), p.entries_.end());
    return p;
  }

  std::string shape_string() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

  bool operator==(const StructuralPattern&) const = default;
  auto operator<=>(const StructuralPattern&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Entry> entries_;
};

/// p x m pattern of allowed output-to-input links.
using InformationPattern = StructuralPattern;

inline void require_same_shape(const StructuralPattern& k1, const StructuralPattern& k2) {
  if (!k1.same_shape(k2))
    throw DimensionError("pattern shapes differ: " + k1.shape_string() + " vs " + k2.shape_string());
}

/// nonzeros(k1) is a proper subset of nonzeros(k2).
inline bool is_strict_subpattern(const StructuralPattern& k1, const StructuralPattern& k2) {
  require_same_shape(k1, k2);
  return k1.nonzero_count() < k2.nonzero_count() &&
         std::includes(k2.entries().begin(), k2.entries().end(), k1.entries().begin(), k1.entries().end());
}

/// Entrywise OR.
inline StructuralPattern pattern_sum(const StructuralPattern& k1, const StructuralPattern& k2) {
  require_same_shape(k1, k2);
  StructuralPattern out = k1;
  for (const Entry& e : k2.entries()) out.insert(e);
  return out;
}

/// (A n x n, B n x p, C m x n).
class StructuralSystem {
 public:
  StructuralSystem() = default;
  StructuralSystem(StructuralPattern a, StructuralPattern b, StructuralPattern c)
      : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
    if (a_.rows() != a_.cols()) throw DimensionError("A must be square, got " + a_.shape_string());
    if (b_.rows() != a_.rows())
      throw DimensionError("B must have " + std::to_string(a_.rows()) + " rows, got " + b_.shape_string());
    if (c_.cols() != a_.rows())
      throw DimensionError("C must have " + std::to_string(a_.rows()) + " columns, got " + c_.shape_string());
  }

  /// B = C = I_n, the setting of every constructive design routine.
  static StructuralSystem with_identity_io(StructuralPattern a) {
    const std::size_t n = a.rows();
    return StructuralSystem(std::move(a), StructuralPattern::identity(n), StructuralPattern::identity(n));
  }

  const StructuralPattern& a() const { return a_; }
  const StructuralPattern& b() const { return b_; }
  const StructuralPattern& c() const { return c_; }
  std::size_t n() const { return a_.rows(); }
  std::size_t p() const { return b_.cols(); }
  std::size_t m() const { return c_.rows(); }

  bool has_identity_io() const {
    return b_ == StructuralPattern::identity(n()) && c_ == StructuralPattern::identity(n());
  }

  bool operator==(const StructuralSystem&) const = default;

 private:
  StructuralPattern a_, b_, c_;
};

inline void require_compatible(const StructuralSystem& sys, const InformationPattern& k) {
  if (k.rows() != sys.p() || k.cols() != sys.m())
    throw DimensionError("information pattern must be " + std::to_string(sys.p()) + "x" +
                         std::to_string(sys.m()) + ", got " + k.shape_string());
}

inline void require_identity_io(const StructuralSystem& sys) {
  if (!sys.has_identity_io())
    throw InvalidArgument("operation requires B = C = identity");
}

enum class VertexKind { state, input, output };
enum class EdgeClass { state_state, input_state, state_output, output_input };

/// Typed digraph over X u U u Y. Vertex layout: states 0..n-1, inputs n..n+p-1,
/// outputs n+p..n+p+m-1.
class SystemDigraph {
 public:
  SystemDigraph() = default;
  SystemDigraph(std::size_t n, std::size_t p, std::size_t m) : n_(n), p_(p), m_(m), g_(n + p + m) {}

  std::size_t state_count() const { return n_; }
  std::size_t input_count() const { return p_; }
  std::size_t output_count() const { return m_; }
  const Digraph& graph() const { return g_; }

  Vertex state(std::size_t i) const { return checked(i, n_, "state"); }
  Vertex input(std::size_t i) const { return n_ + checked(i, p_, "input"); }
  Vertex output(std::size_t j) const { return n_ + p_ + checked(j, m_, "output"); }

  VertexKind kind(Vertex v) const {
    if (v < n_) return VertexKind::state;
    if (v < n_ + p_) return VertexKind::input;
    if (v < n_ + p_ + m_) return VertexKind::output;
    throw InvalidArgument("vertex " + std::to_string(v) + " out of range");
  }

  /// Index within the vertex's own class.
  std::size_t local_index(Vertex v) const {
    switch (kind(v)) {
      case VertexKind::state: return v;
      case VertexKind::input: return v - n_;
      case VertexKind::output: return v - n_ - p_;
    }
    return npos;
  }

  /// "x1", "u2", "y3" (1-based).
  std::string label(Vertex v) const {
    static constexpr char prefix[] = {'x', 'u', 'y'};
    return prefix[static_cast<int>(kind(v))] + std::to_string(local_index(v) + 1);
  }

  EdgeClass edge_class(Arc a) const {
    const VertexKind t = kind(a.tail), h = kind(a.head);
    if (t == VertexKind::state && h == VertexKind::state) return EdgeClass::state_state;
    if (t == VertexKind::input && h == VertexKind::state) return EdgeClass::input_state;
    if (t == VertexKind::state && h == VertexKind::output) return EdgeClass::state_output;
    if (t == VertexKind::output && h == VertexKind::input) return EdgeClass::output_input;
    throw InvalidArgument("arc " + label(a.tail) + "->" + label(a.head) + " is not a system edge class");
  }

  bool add_edge(Vertex tail, Vertex head) {
    edge_class({tail, head});
    return g_.add_edge(tail, head);
  }

  std::vector<Arc> edges_of(EdgeClass cls) const {
    std::vector<Arc> out;
    for (const Arc& a : g_.edges())
      if (edge_class(a) == cls) out.push_back(a);
    return out;
  }

  bool is_feedback(Arc a) const { return kind(a.tail) == VertexKind::output && kind(a.head) == VertexKind::input; }

  // Read the four edge classes back into patterns.
  StructuralPattern state_pattern() const {
    StructuralPattern p(n_, n_);
    for (const Arc& a : edges_of(EdgeClass::state_state)) p.insert({a.head, a.tail});
    return p;
  }
  StructuralPattern input_pattern() const {
    StructuralPattern p(n_, p_);
    for (const Arc& a : edges_of(EdgeClass::input_state)) p.insert({a.head, local_index(a.tail)});
    return p;
  }
  StructuralPattern output_pattern() const {
    StructuralPattern p(m_, n_);
    for (const Arc& a : edges_of(EdgeClass::state_output)) p.insert({local_index(a.head), a.tail});
    return p;
  }
  StructuralPattern feedback_pattern() const {
    StructuralPattern p(p_, m_);
    for (const Arc& a : edges_of(EdgeClass::output_input)) p.insert({local_index(a.head), local_index(a.tail)});
    return p;
  }

 private:
  static std::size_t checked(std::size_t i, std::size_t bound, const char* what) {
    if (i >= bound) throw InvalidArgument(std::string(what) + " index " + std::to_string(i) + " out of range");
    return i;
  }

  std::size_t n_ = 0, p_ = 0, m_ = 0;
  Digraph g_;
};

/// D(A) as a plain digraph on the n state vertices.
inline Digraph state_digraph(const StructuralPattern& a) {
  if (a.rows() != a.cols()) throw DimensionError("A must be square, got " + a.shape_string());
  Digraph g(a.rows());
  for (const Entry& e : a.entries()) g.add_edge(e.col, e.row);
  return g;
}

inline SystemDigraph build_state_digraph(const StructuralSystem& sys) {
  SystemDigraph d(sys.n(), 0, 0);
  for (const Entry& e : sys.a().entries()) d.add_edge(d.state(e.col), d.state(e.row));
  return d;
}

inline SystemDigraph build_closed_loop_digraph(const StructuralSystem& sys, const InformationPattern& k) {
  require_compatible(sys, k);
  SystemDigraph d(sys.n(), sys.p(), sys.m());
  for (const Entry& e : sys.a().entries()) d.add_edge(d.state(e.col), d.state(e.row));
  for (const Entry& e : sys.b().entries()) d.add_edge(d.input(e.col), d.state(e.row));
  for (const Entry& e : sys.c().entries()) d.add_edge(d.state(e.col), d.output(e.row));
  for (const Entry& e : k.entries()) d.add_edge(d.output(e.col), d.input(e.row));
  return d;
}

/// B(A): left = tails, right = heads, one edge per state arc.
inline BipartiteGraph state_bipartite_graph(const StructuralSystem& sys) {
  BipartiteGraph b(sys.n(), sys.n());
  for (const Entry& e : sys.a().entries()) b.add_edge(e.col, e.row);
  return b;
}

}  // namespace sfmkit
