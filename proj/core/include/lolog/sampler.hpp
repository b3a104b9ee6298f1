#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lolog/model.hpp"
#include "lolog/numerics.hpp"

namespace lolog {

/// P(edge) = e^{θ·c1} / (1 + e^{θ·c1}). Throws NumericalError on NaN.
double edge_prob(double eta);
double edge_prob(const Vector& theta, std::span<const double> c1);

/// One simulated (graph, order) pair with its accumulated statistics.
struct SampleDraw {
  Graph graph{1, false};
  EdgeOrder order;        // sequence empty unless recorded
  Vector g;               // realized statistics g(y, s)
  Vector G;               // Σ_t E(c | y^{t-1}, s_{<=t}); empty if not accumulated
  Vector h;               // moment statistics on the final graph
  double log_cond_lik = 0.0;  // log p(y | s, θ); NaN if not accumulated
};

struct SampleOptions {
  bool record_order = true;
  /// Accumulate G and log p(y | s, θ). Required by the fitters.
  bool accumulate_expectations = true;
  /// Order-independent statistics evaluated on each final graph.
  std::vector<TermSpec> moments;
  /// Permit the thinned sampler for growth models whose change statistics
  /// depend only on the alter's degree (edges, pref-attach, log-order under
  /// vertex entry). Used only when neither the order nor G is requested.
  bool allow_fast_path = true;
};

/// True when sample_graph would take the thinned path for these options.
bool fast_path_eligible(const Model& model, const SampleOptions& options);

/// Exact forward draw from p(y | s, θ) p(s). Each replicate consumes two
/// RNG streams derived from `seed`: one for the ordering, one for the
/// edge decisions (one uniform per dyad, in sequence order).
SampleDraw sample_graph(const Model& model, const Vector& theta, std::uint64_t seed,
                        const SampleOptions& options = {});

/// r independent draws; replicate i uses derive_seed(master_seed, first + i).
/// The result does not depend on the thread count.
std::vector<SampleDraw> sample_batch(const Model& model, const Vector& theta, int r, std::uint64_t master_seed,
                                     const SampleOptions& options = {}, int threads = 0, int first = 0);

/// Statistic matrices of a batch (one row per replicate) without keeping graphs.
struct BatchStats {
  Matrix g;
  Matrix G;
  Matrix h;
};

BatchStats sample_batch_stats(const Model& model, const Vector& theta, std::span<const TermSpec> moments, int r,
                              std::uint64_t master_seed, int threads = 0);

struct ReplayResult {
  double log_lik = 0.0;
  Vector g;
  Vector G;
};

/// Replays a fixed graph along a fixed order: exact log p(y | s, θ), g and G.
ReplayResult cond_log_lik(const Model& model, const Vector& theta, const Graph& graph, const EdgeOrder& order);

/// Requested count, else LOLOG_THREADS, else hardware concurrency.
int resolve_threads(int requested);

}  // namespace lolog
