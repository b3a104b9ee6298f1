#include "lolog/sampler.hpp"

#include <algorithm>
#include <bit>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <unordered_set>

#include "lolog/error.hpp"
#include "lolog/rng.hpp"

namespace lolog {

namespace {

double log1pexp(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double dot(const Vector& theta, std::span<const double> c) {
  double eta = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) eta += theta(static_cast<Eigen::Index>(j)) * c[j];
  return eta;
}

void check_theta(const Model& model, const Vector& theta) {
  if (static_cast<std::size_t>(theta.size()) != model.size()) {
    throw InvalidArgument("theta has " + std::to_string(theta.size()) + " entries but the model has " +
                          std::to_string(model.size()) + " terms");
  }
  if (!theta.allFinite()) throw InvalidArgument("theta has non-finite entries");
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Degree classes for the thinned sampler: {0}, {1}, {2,3}, {4..7}, ...
int degree_bucket(int d) { return d == 0 ? 0 : std::bit_width(static_cast<unsigned>(d)); }
int bucket_low(int b) { return b == 0 ? 0 : 1 << (b - 1); }
int bucket_high(int b) { return b == 0 ? 0 : (1 << b) - 1; }

struct PrefTerm {
  std::size_t index;
  double theta;
  double k;
};

/// Growth sampler for models whose edge probability depends only on the
/// entering vertex's position and the alter's degree. Within a round every
/// alter gets a mark with probability equal to an upper bound on its edge
/// probability over the whole round (bound taken per degree class); only
/// marked alters are visited, in uniformly random order, and accepted with
/// probability p / bound. Unmarked alters would never have formed an edge,
/// so the law of the graph is that of the dyad-by-dyad sampler.
class ThinnedGrowthSampler {
 public:
  ThinnedGrowthSampler(const Model& model, const Vector& theta) : model_(model) {
    for (std::size_t j = 0; j < model.terms.size(); ++j) {
      const auto& t = model.terms[j];
      const double th = theta(static_cast<Eigen::Index>(j));
      switch (t.kind) {
        case TermKind::edges:
          edges_.push_back(j);
          theta_edges_ += th;
          break;
        case TermKind::log_order:
          order_.push_back(j);
          theta_order_ += th;
          break;
        case TermKind::pref_attach:
          pref_.push_back({j, th, t.offset});
          break;
        default:
          throw InvalidArgument("term not supported by the thinned sampler");
      }
    }
  }

  SampleDraw draw(std::uint64_t seed) {
    Rng order_rng(derive_seed(seed, 1));
    Rng edge_rng(derive_seed(seed, 2));
    const Vertex n = model_.n;
    const auto sequence = sample_entry_sequence(model_.order, n, order_rng);

    SampleDraw out;
    out.graph = Graph(n, false);
    out.order.entry_times.assign(static_cast<std::size_t>(n), 0);
    for (std::size_t t = 0; t < sequence.size(); ++t) {
      out.order.entry_times[static_cast<std::size_t>(sequence[t])] = static_cast<int>(t + 1);
    }
    std::vector<double> g(model_.size(), 0.0);
    Graph& graph = out.graph;

    buckets_.assign(1, {});
    bucket_of_.assign(static_cast<std::size_t>(n), -1);
    slot_.assign(static_cast<std::size_t>(n), 0);
    std::int64_t edges = 0;

    if (n >= 2) insert(sequence[0], 0);
    for (std::size_t r = 1; r < sequence.size(); ++r) {
      const Vertex v = sequence[r];
      const double t = static_cast<double>(r + 1);
      const double log_t = std::log(t);
      const double alters = static_cast<double>(r);
      const double base = theta_edges_ + theta_order_ * log_t;

      // Mark candidates per degree class.
      candidates_.clear();
      for (std::size_t b = 0; b < buckets_.size(); ++b) {
        const auto& members = buckets_[b];
        if (members.empty()) continue;
        double eta_max = base;
        for (const auto& p : pref_) {
          const int d = p.theta >= 0.0 ? bucket_high(static_cast<int>(b)) : bucket_low(static_cast<int>(b));
          const double s = p.k * alters + 2.0 * static_cast<double>(edges) + (p.theta >= 0.0 ? 0.0 : alters);
          eta_max += p.theta * (std::log(p.k + d) - std::log(s));
        }
        const double q = logistic(eta_max);
        if (!(q > 0.0)) continue;
        std::binomial_distribution<std::int64_t> binom(static_cast<std::int64_t>(members.size()), std::min(q, 1.0));
        const auto count = static_cast<std::size_t>(binom(order_rng));
        choose(members, count, q, order_rng);
      }
      shuffle(candidates_.begin(), candidates_.end(), order_rng);

      int formed = 0;
      accepted_.clear();
      for (const auto& [alter, bound] : candidates_) {
        const int d = graph.degree(alter);
        double eta = base;
        for (const auto& p : pref_) {
          const double s = p.k * alters + 2.0 * static_cast<double>(edges) + formed;
          eta += p.theta * (std::log(p.k + d) - std::log(s));
        }
        const double prob = logistic(eta);
        if (uniform01(edge_rng) * bound < prob) {
          for (std::size_t j : edges_) g[j] += 1.0;
          for (std::size_t j : order_) g[j] += log_t;
          for (const auto& p : pref_) {
            const double s = p.k * alters + 2.0 * static_cast<double>(edges) + formed;
            g[p.index] += std::log((p.k + d) / s);
          }
          graph.add_edge({v, alter});
          accepted_.push_back(alter);
          ++formed;
        }
      }
      for (Vertex a : accepted_) move(a, graph.degree(a));
      insert(v, graph.degree(v));
      edges += formed;
    }
    out.g = to_vector(g);
    out.log_cond_lik = std::numeric_limits<double>::quiet_NaN();
    return out;
  }

 private:
  void insert(Vertex v, int degree) {
    const auto b = static_cast<std::size_t>(degree_bucket(degree));
    if (b >= buckets_.size()) buckets_.resize(b + 1);
    bucket_of_[static_cast<std::size_t>(v)] = static_cast<int>(b);
    slot_[static_cast<std::size_t>(v)] = buckets_[b].size();
    buckets_[b].push_back(v);
  }

  void move(Vertex v, int degree) {
    const auto from = static_cast<std::size_t>(bucket_of_[static_cast<std::size_t>(v)]);
    if (static_cast<int>(from) == degree_bucket(degree)) return;
    auto& list = buckets_[from];
    const auto at = slot_[static_cast<std::size_t>(v)];
    list[at] = list.back();
    slot_[static_cast<std::size_t>(list[at])] = at;
    list.pop_back();
    insert(v, degree);
  }

  // Uniform random subset of `count` members.
  void choose(const std::vector<Vertex>& members, std::size_t count, double bound, Rng& rng) {
    if (count == 0) return;
    if (count * 4 >= members.size()) {
      scratch_.assign(members.begin(), members.end());
      for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + uniform_index(rng, scratch_.size() - i);
        std::swap(scratch_[i], scratch_[j]);
        candidates_.push_back({scratch_[i], bound});
      }
      return;
    }
    chosen_.clear();
    while (chosen_.size() < count) {
      const Vertex v = members[uniform_index(rng, members.size())];
      if (chosen_.insert(v).second) candidates_.push_back({v, bound});
    }
  }

  const Model& model_;
  std::vector<std::size_t> edges_;
  std::vector<std::size_t> order_;
  std::vector<PrefTerm> pref_;
  double theta_edges_ = 0.0;
  double theta_order_ = 0.0;

  std::vector<std::vector<Vertex>> buckets_;
  std::vector<int> bucket_of_;
  std::vector<std::size_t> slot_;
  std::vector<std::pair<Vertex, double>> candidates_;
  std::vector<Vertex> accepted_;
  std::vector<Vertex> scratch_;
  std::unordered_set<Vertex> chosen_;
};

SampleDraw sample_generic(const Model& model, const Vector& theta, std::uint64_t seed, const SampleOptions& options) {
  Rng order_rng(derive_seed(seed, 1));
  Rng edge_rng(derive_seed(seed, 2));
  const Graph layout = model.empty_graph();
  OrderStream stream(model.order, layout, order_rng);
  ChangeStatEngine engine(model);

  const std::size_t q = model.size();
  std::vector<double> c(q, 0.0);
  std::vector<double> g(q, 0.0);
  std::vector<double> G(q, 0.0);
  double loglik = 0.0;

  SampleDraw out;
  if (options.record_order) out.order.sequence.reserve(static_cast<std::size_t>(layout.dyad_count()));
  Dyad d;
  while (stream.next(d)) {
    if (options.record_order) out.order.sequence.push_back(d);
    engine.prepare(d, stream.entry_times());
    engine.change_stats(d, c);
    const double eta = dot(theta, c);
    const double p = edge_prob(eta);
    const bool edge = uniform01(edge_rng) < p;
    if (options.accumulate_expectations) {
      for (std::size_t j = 0; j < q; ++j) G[j] += p * c[j];
      loglik -= edge ? log1pexp(-eta) : log1pexp(eta);
    }
    if (edge) {
      for (std::size_t j = 0; j < q; ++j) g[j] += c[j];
      engine.commit_edge(d);
    }
  }
  out.graph = engine.state().graph();
  out.order.entry_times = stream.entry_times();
  out.g = to_vector(g);
  if (options.accumulate_expectations) {
    out.G = to_vector(G);
    out.log_cond_lik = loglik;
  } else {
    out.log_cond_lik = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

template <class F>
void parallel_for(int count, int threads, F&& body) {
  const int workers = std::max(1, std::min(resolve_threads(threads), count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

double edge_prob(double eta) {
  if (std::isnan(eta)) throw NumericalError("edge probability requested for NaN linear predictor");
  return logistic(eta);
}

double edge_prob(const Vector& theta, std::span<const double> c1) {
  if (static_cast<std::size_t>(theta.size()) != c1.size()) throw InvalidArgument("edge_prob: dimension mismatch");
  return edge_prob(dot(theta, c1));
}

bool fast_path_eligible(const Model& model, const SampleOptions& options) {
  if (!options.allow_fast_path || options.record_order || options.accumulate_expectations) return false;
  if (model.order.mode != OrderMode::vertex_entry || model.directed) return false;
  return std::all_of(model.terms.begin(), model.terms.end(), [](const TermSpec& t) {
    return t.kind == TermKind::edges || t.kind == TermKind::pref_attach || t.kind == TermKind::log_order;
  });
}

SampleDraw sample_graph(const Model& model, const Vector& theta, std::uint64_t seed, const SampleOptions& options) {
  model.validate();
  check_theta(model, theta);
  SampleDraw draw = fast_path_eligible(model, options) ? ThinnedGrowthSampler(model, theta).draw(seed)
                                                       : sample_generic(model, theta, seed, options);
  if (!options.moments.empty()) {
    draw.h = to_vector(evaluate_statistics(options.moments, draw.graph, model.attrs(), draw.order.entry_times));
  }
  return draw;
}

std::vector<SampleDraw> sample_batch(const Model& model, const Vector& theta, int r, std::uint64_t master_seed,
                                     const SampleOptions& options, int threads, int first) {
  if (r < 1) throw InvalidArgument("batch size must be at least 1");
  model.validate();
  check_theta(model, theta);
  std::vector<SampleDraw> draws(static_cast<std::size_t>(r));
  parallel_for(r, threads, [&](int i) {
    draws[static_cast<std::size_t>(i)] =
        sample_graph(model, theta, derive_seed(master_seed, static_cast<std::uint64_t>(first + i)), options);
  });
  return draws;
}

BatchStats sample_batch_stats(const Model& model, const Vector& theta, std::span<const TermSpec> moments, int r,
                              std::uint64_t master_seed, int threads) {
  if (r < 1) throw InvalidArgument("batch size must be at least 1");
  model.validate();
  check_theta(model, theta);
  SampleOptions options;
  options.record_order = false;
  options.accumulate_expectations = true;
  options.moments.assign(moments.begin(), moments.end());
  const auto q = static_cast<Eigen::Index>(model.size());
  const auto p = static_cast<Eigen::Index>(moments.size());
  BatchStats stats{Matrix(r, q), Matrix(r, q), Matrix(r, p)};
  parallel_for(r, threads, [&](int i) {
    const auto draw = sample_graph(model, theta, derive_seed(master_seed, static_cast<std::uint64_t>(i)), options);
    stats.g.row(i) = draw.g.transpose();
    stats.G.row(i) = draw.G.transpose();
    if (p > 0) stats.h.row(i) = draw.h.transpose();
  });
  return stats;
}

ReplayResult cond_log_lik(const Model& model, const Vector& theta, const Graph& graph, const EdgeOrder& order) {
  check_theta(model, theta);
  if (graph.size() != model.n || graph.directed() != model.directed) {
    throw InvalidArgument("graph does not match the model's vertex set");
  }
  check_order(graph, order);
  ChangeStatEngine engine(model);
  const std::size_t q = model.size();
  std::vector<double> c(q, 0.0);
  std::vector<double> g(q, 0.0);
  std::vector<double> G(q, 0.0);
  double loglik = 0.0;
  for (const Dyad& d : order.sequence) {
    engine.prepare(d, order.entry_times);
    engine.change_stats(d, c);
    const double eta = dot(theta, c);
    const double p = edge_prob(eta);
    for (std::size_t j = 0; j < q; ++j) G[j] += p * c[j];
    if (graph.has_edge(d)) {
      loglik -= log1pexp(-eta);
      for (std::size_t j = 0; j < q; ++j) g[j] += c[j];
      engine.commit_edge(d);
    } else {
      loglik -= log1pexp(eta);
    }
  }
  return {loglik, to_vector(g), to_vector(G)};
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("LOLOG_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace lolog
