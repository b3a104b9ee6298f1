#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace lolog {

using Vertex = std::int32_t;

/// An edge variable. For undirected graphs the canonical form has tail < head.
struct Dyad {
  Vertex tail = 0;
  Vertex head = 0;

  friend auto operator<=>(const Dyad&, const Dyad&) = default;
};

/// Binary graph state over n dense 0-based vertices. Neighbor sets are kept
/// sorted so that intersections are linear merges.
///
/// Directed graphs are supported but the structural terms treat them through
/// their undirected projection; that path is experimental.
class Graph {
 public:
  Graph(Vertex n, bool directed);

  Vertex size() const noexcept { return n_; }
  bool directed() const noexcept { return directed_; }

  /// Number of edge variables: n(n-1)/2 undirected, n(n-1) directed.
  std::int64_t dyad_count() const noexcept;
  std::int64_t edge_count() const noexcept { return edge_count_; }

  bool has_edge(Dyad d) const;
  /// Sets the edge variable. Idempotent. Throws on self-loops or bad ids.
  void set_edge(Dyad d, bool value);
  void add_edge(Dyad d) { set_edge(d, true); }

  /// Total degree (out + in for directed graphs).
  int degree(Vertex v) const;
  int out_degree(Vertex v) const;
  int in_degree(Vertex v) const;

  /// Undirected neighbors, or out-neighbors for directed graphs.
  std::span<const Vertex> neighbors(Vertex v) const;
  std::span<const Vertex> out_neighbors(Vertex v) const { return neighbors(v); }
  std::span<const Vertex> in_neighbors(Vertex v) const;

  /// |N(tail) ∩ N(head)|, using the undirected projection for directed graphs.
  int shared_neighbors(Dyad d) const;

  /// Row-major enumeration of the dyads: (0,1),(0,2),...,(1,2),...
  Dyad dyad_at(std::int64_t index) const;
  std::int64_t dyad_index(Dyad d) const;

  /// Canonical orientation (tail < head when undirected). Validates ids.
  Dyad canonical(Dyad d) const;
  void check_dyad(Dyad d) const;

  std::vector<Dyad> edges() const;
  void clear();

  /// Subgraph induced by `keep` (vertices renumbered in the given order).
  Graph induced_subgraph(std::span<const Vertex> keep) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.directed_ == b.directed_ && a.out_ == b.out_ && a.in_ == b.in_;
  }

 private:
  std::vector<Vertex> undirected_neighbors(Vertex v) const;

  Vertex n_;
  bool directed_;
  std::int64_t edge_count_ = 0;
  std::vector<std::vector<Vertex>> out_;
  std::vector<std::vector<Vertex>> in_;  // empty unless directed
};

}  // namespace lolog
