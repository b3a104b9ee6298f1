#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "lolog/attributes.hpp"
#include "lolog/graph.hpp"
#include "lolog/ordering.hpp"
#include "lolog/terms.hpp"

namespace lolog {

/// A LOLOG model: the statistic terms (θ follows their order), the ordering
/// distribution p(s), and the vertex set they act on.
struct Model {
  Vertex n = 1;
  bool directed = false;
  std::vector<TermSpec> terms;
  OrderSpec order;
  std::shared_ptr<const VertexAttributes> attributes;

  std::size_t size() const { return terms.size(); }
  const VertexAttributes* attrs() const { return attributes.get(); }

  /// Throws InvalidArgument when terms, attributes, or the order spec are inconsistent.
  void validate() const;
  /// Every g_j(y, s) depends on y only. log-order qualifies when p(s) fixes
  /// the vertex entry sequence.
  bool order_independent() const;
  bool dyad_independent() const;
  bool term_order_independent(const TermSpec& t) const;

  std::vector<std::string> labels() const;
  Graph empty_graph() const { return Graph(n, directed); }
};

/// Per-replicate evaluation context: the growing graph, entry bookkeeping and
/// the incremental state of every term. Thread-confined.
class ChangeStatEngine {
 public:
  explicit ChangeStatEngine(const Model& model);

  std::size_t size() const { return terms_.size(); }
  const GrowthState& state() const { return state_; }

  /// Back to the empty graph with no vertex entered.
  void reset();
  /// Enters whichever endpoints of d have not entered yet, earliest first.
  void prepare(Dyad d, std::span<const int> entry_times);
  /// c(1 | y^{t-1}, s_{<=t}); pure.
  void change_stats(Dyad d, std::span<double> out) const;
  /// Writes the change statistics, then sets the edge and advances term state.
  void apply_edge(Dyad d, std::span<double> out);
  /// Sets the edge and advances term state without recomputing changes.
  void commit_edge(Dyad d);

 private:
  void enter(Vertex v, int time);

  GrowthState state_;
  std::vector<std::unique_ptr<Term>> terms_;
};

/// g(y, s): replays `order` from the empty graph, summing realized changes.
std::vector<double> full_stats(const Model& model, const Graph& final_graph, const EdgeOrder& order);

}  // namespace lolog
