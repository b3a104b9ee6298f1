#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lolog/model.hpp"
#include "lolog/numerics.hpp"

namespace lolog {

/// Exact joint law of (Y, S) on a tiny vertex set, by enumerating every
/// ordering and every graph. Graph configurations are indexed by bitmask:
/// bit i is dyad Graph::dyad_at(i).
struct ExactLaw {
  std::vector<double> graph_prob;   // p(y | θ), summed over orderings
  double total = 0.0;               // Σ_{y,s} p(y | s, θ) p(s); 1 up to rounding
  std::size_t order_count = 0;

  Vector mean_g;                    // E g(Y, S)
  Vector mean_G;                    // E G(Y, S)
  Vector mean_h;                    // E h(Y)
  Matrix cov_g;                     // cov(g)
  Matrix cov_h;                     // cov(h)
  /// Derivatives of the expectations: entry (k, j) = ∂E(·_k)/∂θ_j
  /// = cov(·_k, g_j) - cov(·_k, G_j).
  Matrix dmean_g;
  Matrix dmean_h;
};

/// Enumerates every ordering permitted by the model's OrderSpec. Throws
/// InvalidArgument when orderings × graphs exceeds a few million.
ExactLaw exact_law(const Model& model, const Vector& theta, std::span<const TermSpec> moments = {});

/// Every ordering the OrderSpec can produce, with log p(s). Same enumeration limit.
struct WeightedOrder {
  EdgeOrder order;
  double log_prob = 0.0;
};
std::vector<WeightedOrder> enumerate_orders(const Model& model);

/// Closed-form law of a dyad-independent model: independent logistic dyads.
/// Entry i is P(Y_i = 1) for dyad Graph::dyad_at(i). Works for any n.
std::vector<double> exact_dyad_independent_law(const Model& model, const Vector& theta);

/// Probability of the configuration `mask` under independent dyad probabilities.
double dyad_law_graph_prob(std::span<const double> dyad_probs, std::uint64_t mask);

Graph graph_from_mask(Vertex n, bool directed, std::uint64_t mask);
std::uint64_t mask_of(const Graph& g);

}  // namespace lolog
