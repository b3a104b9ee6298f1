#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lolog/graph.hpp"
#include "lolog/rng.hpp"

namespace lolog {

enum class OrderMode { uniform, vertex_entry };

/// Distribution p(s) over edge-variable orderings.
///
/// `uniform`: every permutation of the dyads is equally likely.
/// `vertex_entry`: vertices enter group by group (uniformly shuffled within a
/// group); when a vertex enters, the dyads joining it to the vertices already
/// present are considered in uniformly random order.
struct OrderSpec {
  OrderMode mode = OrderMode::uniform;
  std::vector<std::vector<Vertex>> entry_groups;

  static OrderSpec uniform() { return {}; }
  static OrderSpec vertex_entry(std::vector<std::vector<Vertex>> groups);
  /// Vertex entry with a single group: fully random entry sequence.
  static OrderSpec random_entry(Vertex n);
  /// Vertex entry along a known sequence (singleton groups).
  static OrderSpec fixed_entry(std::span<const Vertex> sequence);

  /// Throws InvalidArgument unless the groups partition {0,...,n-1}.
  void validate(Vertex n) const;
  /// True when p(s) fixes the entry sequence, so entry positions are observed.
  bool entry_observed() const;
};

/// A realized ordering: the dyad sequence plus the 1-based entry position of
/// every vertex. In uniform mode a vertex enters when it first appears in the
/// sequence (tail before head when both appear at once).
struct EdgeOrder {
  std::vector<Dyad> sequence;
  std::vector<int> entry_times;

  /// Vertices sorted by entry time.
  std::vector<Vertex> entry_sequence() const;
};

/// Lazily generates an ordering one dyad at a time. Vertex-entry orders need
/// O(n) memory; uniform orders hold one shuffled index array.
class OrderStream {
 public:
  OrderStream(const OrderSpec& spec, const Graph& layout, Rng& rng);

  /// Next dyad in the ordering; false when exhausted.
  bool next(Dyad& out);

  /// Entry positions. In vertex-entry mode these are known up front; in uniform
  /// mode they are filled in as vertices first appear.
  const std::vector<int>& entry_times() const { return entry_times_; }

 private:
  void begin_round();

  OrderMode mode_;
  Vertex n_;
  bool directed_;
  Rng* rng_;
  std::vector<int> entry_times_;

  // uniform
  const Graph* layout_;
  std::vector<std::int64_t> shuffled_;
  std::size_t cursor_ = 0;
  int next_entry_ = 1;

  // vertex entry
  std::vector<Vertex> entry_sequence_;
  std::size_t round_ = 1;  // index in entry_sequence_ of the vertex entering now
  std::vector<Dyad> round_dyads_;
};

EdgeOrder sample_order(const OrderSpec& spec, const Graph& layout, Rng& rng);

/// The vertex entry sequence of a vertex-entry spec: groups in order, each
/// uniformly shuffled. Consumes the same draws as OrderStream does up front.
std::vector<Vertex> sample_entry_sequence(const OrderSpec& spec, Vertex n, Rng& rng);

/// log p(s) under the OrderSpec; -infinity when the order is infeasible.
double log_prob_order(const OrderSpec& spec, const Graph& layout, const EdgeOrder& order);

/// Entry positions implied by first appearance in a dyad sequence.
std::vector<int> first_appearance_entry_times(Vertex n, std::span<const Dyad> sequence);

/// Throws InvalidArgument unless `order` is a permutation of the dyads of
/// `layout` with entry times consistent with the sequence.
void check_order(const Graph& layout, const EdgeOrder& order);

}  // namespace lolog
