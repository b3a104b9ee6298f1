#include "lolog/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "lolog/error.hpp"
#include "lolog/sampler.hpp"

namespace lolog {

namespace {

constexpr double kMaxTerms = 5e6;  // orderings × graphs

double log_factorial(std::size_t k) { return std::lgamma(static_cast<double>(k) + 1.0); }

double factorial(std::size_t k) { return std::exp(log_factorial(k)); }

// Number of orderings without building them.
double count_orders(const Model& model, const Graph& layout) {
  if (model.order.mode == OrderMode::uniform) return factorial(static_cast<std::size_t>(layout.dyad_count()));
  double count = 1.0;
  for (const auto& group : model.order.entry_groups) count *= factorial(group.size());
  for (Vertex t = 2; t <= model.n; ++t) count *= factorial(static_cast<std::size_t>(model.directed ? 2 * (t - 1) : t - 1));
  return count;
}

// Calls f for every permutation of `items` (lexicographic over positions).
template <class T, class F>
void for_each_permutation(std::vector<T> items, F&& f) {
  std::vector<std::size_t> idx(items.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<T> perm(items.size());
  do {
    for (std::size_t i = 0; i < idx.size(); ++i) perm[i] = items[idx[i]];
    f(perm);
  } while (std::next_permutation(idx.begin(), idx.end()));
}

void enumerate_uniform(const Graph& layout, std::vector<WeightedOrder>& out) {
  std::vector<Dyad> dyads;
  for (std::int64_t i = 0; i < layout.dyad_count(); ++i) dyads.push_back(layout.dyad_at(i));
  const double lp = -log_factorial(dyads.size());
  for_each_permutation(dyads, [&](const std::vector<Dyad>& perm) {
    EdgeOrder o;
    o.sequence = perm;
    o.entry_times = first_appearance_entry_times(layout.size(), perm);
    out.push_back({std::move(o), lp});
  });
}

// Entry sequences: cartesian product of the per-group permutations.
void entry_sequences(const std::vector<std::vector<Vertex>>& groups, std::size_t gi, std::vector<Vertex>& prefix,
                     std::vector<std::vector<Vertex>>& out) {
  if (gi == groups.size()) {
    out.push_back(prefix);
    return;
  }
  for_each_permutation(groups[gi], [&](const std::vector<Vertex>& perm) {
    const auto size = prefix.size();
    prefix.insert(prefix.end(), perm.begin(), perm.end());
    entry_sequences(groups, gi + 1, prefix, out);
    prefix.resize(size);
  });
}

// Round dyads for every entrant, then the product of round permutations.
void round_orders(const std::vector<std::vector<Dyad>>& rounds, std::size_t ri, std::vector<Dyad>& prefix,
                  const std::vector<int>& entry_times, double lp, std::vector<WeightedOrder>& out) {
  if (ri == rounds.size()) {
    out.push_back({EdgeOrder{prefix, entry_times}, lp});
    return;
  }
  for_each_permutation(rounds[ri], [&](const std::vector<Dyad>& perm) {
    const auto size = prefix.size();
    prefix.insert(prefix.end(), perm.begin(), perm.end());
    round_orders(rounds, ri + 1, prefix, entry_times, lp, out);
    prefix.resize(size);
  });
}

void enumerate_vertex_entry(const Model& model, std::vector<WeightedOrder>& out) {
  std::vector<std::vector<Vertex>> sequences;
  std::vector<Vertex> prefix;
  entry_sequences(model.order.entry_groups, 0, prefix, sequences);
  double lp_groups = 0.0;
  for (const auto& group : model.order.entry_groups) lp_groups -= log_factorial(group.size());
  for (const auto& seq : sequences) {
    std::vector<int> entry(static_cast<std::size_t>(model.n));
    for (std::size_t t = 0; t < seq.size(); ++t) entry[static_cast<std::size_t>(seq[t])] = static_cast<int>(t + 1);
    std::vector<std::vector<Dyad>> rounds;
    double lp = lp_groups;
    for (std::size_t t = 1; t < seq.size(); ++t) {
      std::vector<Dyad> round;
      for (std::size_t u = 0; u < t; ++u) {
        if (model.directed) {
          round.push_back({seq[t], seq[u]});
          round.push_back({seq[u], seq[t]});
        } else {
          round.push_back({std::min(seq[t], seq[u]), std::max(seq[t], seq[u])});
        }
      }
      lp -= log_factorial(round.size());
      rounds.push_back(std::move(round));
    }
    std::vector<Dyad> dyads;
    round_orders(rounds, 0, dyads, entry, lp, out);
  }
}

double log_sum_exp(std::span<const double> x) {
  const double m = *std::max_element(x.begin(), x.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double v : x) s += std::exp(v - m);
  return m + std::log(s);
}

}  // namespace

std::vector<WeightedOrder> enumerate_orders(const Model& model) {
  model.order.validate(model.n);
  const Graph layout = model.empty_graph();
  if (layout.dyad_count() > 12) throw InvalidArgument("exact enumeration needs at most 12 dyads");
  const double orders = count_orders(model, layout);
  if (orders > kMaxTerms) {
    throw InvalidArgument("exact enumeration over " + std::to_string(static_cast<long long>(orders)) +
                          " orderings is too large");
  }
  std::vector<WeightedOrder> out;
  out.reserve(static_cast<std::size_t>(orders));
  if (model.order.mode == OrderMode::uniform) {
    enumerate_uniform(layout, out);
  } else {
    enumerate_vertex_entry(model, out);
  }
  return out;
}

ExactLaw exact_law(const Model& model, const Vector& theta, std::span<const TermSpec> moments) {
  model.validate();
  const Graph layout = model.empty_graph();
  const auto nd = static_cast<int>(layout.dyad_count());
  const double graphs = std::ldexp(1.0, nd);
  if (nd > 12 || count_orders(model, layout) * graphs > kMaxTerms) {
    throw InvalidArgument("model is too large for exact enumeration (n = " + std::to_string(model.n) + ")");
  }
  const auto orders = enumerate_orders(model);
  const auto q = static_cast<Eigen::Index>(model.size());
  const auto p = static_cast<Eigen::Index>(moments.size());
  const std::size_t configs = std::size_t{1} << nd;

  // One row per (order, graph): log weight, g, G; h depends on the graph only.
  const std::size_t rows = orders.size() * configs;
  std::vector<double> log_w(rows);
  Matrix g(static_cast<Eigen::Index>(rows), q);
  Matrix G(static_cast<Eigen::Index>(rows), q);
  Matrix h_graph(static_cast<Eigen::Index>(configs), p);
  std::vector<Graph> graph_of;
  graph_of.reserve(configs);
  for (std::uint64_t mask = 0; mask < configs; ++mask) graph_of.push_back(graph_from_mask(model.n, model.directed, mask));

  std::size_t row = 0;
  for (const auto& wo : orders) {
    for (std::uint64_t mask = 0; mask < configs; ++mask, ++row) {
      const auto replay = cond_log_lik(model, theta, graph_of[mask], wo.order);
      log_w[row] = wo.log_prob + replay.log_lik;
      g.row(static_cast<Eigen::Index>(row)) = replay.g.transpose();
      G.row(static_cast<Eigen::Index>(row)) = replay.G.transpose();
    }
  }
  for (std::uint64_t mask = 0; mask < configs; ++mask) {
    if (p == 0) break;
    // Moment statistics must not depend on the ordering; entry positions are
    // only consulted by log-order with an observed entry sequence.
    const auto values = evaluate_statistics(moments, graph_of[mask], model.attrs(), orders.front().order.entry_times);
    for (Eigen::Index k = 0; k < p; ++k) h_graph(static_cast<Eigen::Index>(mask), k) = values[static_cast<std::size_t>(k)];
  }

  const double lse = log_sum_exp(log_w);
  ExactLaw law;
  law.total = std::exp(lse);
  law.order_count = orders.size();
  law.graph_prob.assign(configs, 0.0);
  Vector w(static_cast<Eigen::Index>(rows));
  Matrix h(static_cast<Eigen::Index>(rows), p);
  for (std::size_t i = 0; i < rows; ++i) {
    w(static_cast<Eigen::Index>(i)) = std::exp(log_w[i] - lse);
    law.graph_prob[i % configs] += std::exp(log_w[i]);
    if (p > 0) h.row(static_cast<Eigen::Index>(i)) = h_graph.row(static_cast<Eigen::Index>(i % configs));
  }

  law.mean_g = g.transpose() * w;
  law.mean_G = G.transpose() * w;
  law.mean_h = h.transpose() * w;
  const Matrix gc = g.rowwise() - law.mean_g.transpose();
  const Matrix Gc = G.rowwise() - law.mean_G.transpose();
  const Matrix hc = h.rowwise() - law.mean_h.transpose();
  const auto wd = w.asDiagonal();
  law.cov_g = gc.transpose() * wd * gc;
  law.cov_h = hc.transpose() * wd * hc;
  law.dmean_g = gc.transpose() * wd * gc - gc.transpose() * wd * Gc;
  law.dmean_h = hc.transpose() * wd * gc - hc.transpose() * wd * Gc;
  return law;
}

std::vector<double> exact_dyad_independent_law(const Model& model, const Vector& theta) {
  model.validate();
  if (!model.dyad_independent()) throw InvalidArgument("model has terms that are not dyad independent");
  if (static_cast<std::size_t>(theta.size()) != model.size()) throw InvalidArgument("theta has the wrong dimension");
  const Graph layout = model.empty_graph();
  ChangeStatEngine engine(model);
  // Entry positions are irrelevant to dyad-independent terms; any will do.
  std::vector<int> entry(static_cast<std::size_t>(model.n));
  std::iota(entry.begin(), entry.end(), 1);
  std::vector<double> c(model.size());
  std::vector<double> probs(static_cast<std::size_t>(layout.dyad_count()));
  for (std::int64_t i = 0; i < layout.dyad_count(); ++i) {
    const Dyad d = layout.dyad_at(i);
    engine.reset();
    engine.prepare(d, entry);
    engine.change_stats(d, c);
    probs[static_cast<std::size_t>(i)] = edge_prob(theta, c);
  }
  return probs;
}

double dyad_law_graph_prob(std::span<const double> dyad_probs, std::uint64_t mask) {
  double lp = 0.0;
  for (std::size_t i = 0; i < dyad_probs.size(); ++i) {
    lp += std::log((mask >> i) & 1U ? dyad_probs[i] : 1.0 - dyad_probs[i]);
  }
  return std::exp(lp);
}

Graph graph_from_mask(Vertex n, bool directed, std::uint64_t mask) {
  Graph g(n, directed);
  if (g.dyad_count() < 64 && (mask >> g.dyad_count()) != 0) throw InvalidArgument("mask has bits beyond the dyad count");
  for (std::int64_t i = 0; i < g.dyad_count(); ++i) {
    if ((mask >> i) & 1U) g.add_edge(g.dyad_at(i));
  }
  return g;
}

std::uint64_t mask_of(const Graph& g) {
  if (g.dyad_count() > 64) throw InvalidArgument("graph has more than 64 dyads");
  std::uint64_t mask = 0;
  for (const Dyad& d : g.edges()) mask |= std::uint64_t{1} << g.dyad_index(d);
  return mask;
}

}  // namespace lolog
