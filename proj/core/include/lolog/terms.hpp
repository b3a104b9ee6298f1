#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lolog/attributes.hpp"
#include "lolog/graph.hpp"

namespace lolog {

enum class TermKind {
  edges,
  triangles,
  two_stars,
  degree,
  nodecov_main,
  nodecov_prod,
  nodematch,
  nodemix,
  log_order,
  pref_attach,
  shared_nbrs,
  sv_transitivity,  // moment statistic only; has no change statistic
};

/// A statistic term and its parameters. Immutable once built; shareable.
struct TermSpec {
  TermKind kind = TermKind::edges;
  std::string attr;         // nodecov-*, nodematch, nodemix
  int degree = 0;           // degree(k)
  double offset = 1.0;      // pref-attach k
  std::string level_a;      // nodemix
  std::string level_b;

  std::string label() const;

  static TermSpec edges() { return {}; }
  static TermSpec of(TermKind kind) {
    TermSpec t;
    t.kind = kind;
    return t;
  }
  static TermSpec degree_count(int k);
  static TermSpec nodecov(std::string attribute, bool product = false);
  static TermSpec nodematch(std::string attribute);
  static TermSpec nodemix(std::string attribute, std::string a, std::string b);
  static TermSpec pref_attach(double k);
};

std::string_view kind_name(TermKind kind);
std::optional<TermKind> kind_from_name(std::string_view name);

/// g(y, s) = g(y) for every ordering.
bool order_independent(TermKind kind);
/// Change statistics ignore the rest of the graph and the ordering.
bool dyad_independent(TermKind kind);
/// Usable only as a moment statistic h(y).
bool moment_only(TermKind kind);

/// Throws InvalidArgument on bad parameters or a missing attribute.
void validate_term(const TermSpec& spec, const VertexAttributes* attrs);

/// The partial graph y^{t-1} together with which vertices have entered.
class GrowthState {
 public:
  GrowthState(Vertex n, bool directed);

  const Graph& graph() const { return graph_; }
  /// 1-based entry position, 0 if the vertex has not entered.
  int entry_time(Vertex v) const { return entry_[static_cast<std::size_t>(v)]; }
  int entered_count() const { return entered_; }

  /// The later entrant of the two endpoints, and the other one.
  Vertex acting(Dyad d) const { return entry_time(d.head) >= entry_time(d.tail) ? d.head : d.tail; }
  Vertex alter(Dyad d) const { return acting(d) == d.head ? d.tail : d.head; }

 private:
  friend class ChangeStatEngine;
  Graph graph_;
  std::vector<int> entry_;
  int entered_ = 0;
};

/// One statistic's change computation plus whatever incremental state it
/// needs. Built-in terms only change when an edge is created, so the change
/// for a declined edge, c(0 | ·), is zero.
class Term {
 public:
  virtual ~Term() = default;

  /// c(1 | y^{t-1}, s_{<=t}) for dyad d; `s` is y^{t-1} and must not be mutated.
  virtual double change(const GrowthState& s, Dyad d) const = 0;
  virtual void on_enter(const GrowthState& /*s*/, Vertex /*v*/) {}
  /// Called after the edge d has been added to the graph.
  virtual void on_edge(const GrowthState& /*s*/, Dyad /*d*/) {}
  virtual void reset() {}

  /// Value on a complete graph, computed from scratch. `entry_times` is
  /// consulted only by terms that read entry positions.
  virtual double value(const Graph& g, std::span<const int> entry_times) const = 0;
};

std::unique_ptr<Term> make_term(const TermSpec& spec, const VertexAttributes* attrs);

/// Scratch evaluation of a list of (order-independent or moment-only) statistics.
std::vector<double> evaluate_statistics(std::span<const TermSpec> specs, const Graph& g,
                                        const VertexAttributes* attrs,
                                        std::span<const int> entry_times = {});

}  // namespace lolog
