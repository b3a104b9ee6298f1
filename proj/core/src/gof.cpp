#include "lolog/gof.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "lolog/error.hpp"
#include "lolog/sampler.hpp"
#include "lolog/statistics.hpp"

namespace lolog {

namespace {

constexpr std::array<std::pair<GofStat, std::string_view>, 7> kNames{{
    {GofStat::degree, "degree"},
    {GofStat::esp, "esp"},
    {GofStat::edges, "edges"},
    {GofStat::triangles, "triangles"},
    {GofStat::two_stars, "two-stars"},
    {GofStat::transitivity, "transitivity"},
    {GofStat::sv_transitivity, "sv-transitivity"},
}};

bool is_distribution(GofStat stat) { return stat == GofStat::degree || stat == GofStat::esp; }

template <class T>
std::vector<double> as_double(const std::vector<T>& v) {
  return {v.begin(), v.end()};
}

// Per-graph raw values for one report; graphs[0] is the observed one if present.
struct Rows {
  std::vector<double> observed;
  std::vector<std::vector<double>> simulated;
};

GofReport summarize(GofStat stat, Vertex checkpoint, Rows rows, bool log_bins) {
  GofReport report;
  report.statistic = std::string(gof_stat_name(stat));
  report.checkpoint = checkpoint;
  std::size_t width = rows.observed.size();
  for (const auto& s : rows.simulated) width = std::max(width, s.size());
  auto pad = [&](std::vector<double>& v) {
    if (!v.empty() || is_distribution(stat)) v.resize(width, 0.0);
  };
  const bool have_observed = !rows.observed.empty();
  pad(rows.observed);
  for (auto& s : rows.simulated) pad(s);
  if (!have_observed) rows.observed.clear();

  if (is_distribution(stat) && log_bins) {
    std::vector<double> labels;
    auto bin = [&](std::vector<double>& v) {
      if (v.empty()) return;
      auto b = log_bin(v);
      labels = b.labels;
      v = std::move(b.counts);
    };
    bin(rows.observed);
    for (auto& s : rows.simulated) bin(s);
    report.bins = labels;
  } else {
    for (std::size_t i = 0; i < width; ++i) report.bins.push_back(static_cast<double>(i));
  }
  report.observed = std::move(rows.observed);
  report.simulated = std::move(rows.simulated);
  for (std::size_t b = 0; b < report.bins.size(); ++b) {
    std::vector<double> column;
    column.reserve(report.simulated.size());
    for (const auto& s : report.simulated) column.push_back(s[b]);
    Envelope e;
    e.min = *std::min_element(column.begin(), column.end());
    e.max = *std::max_element(column.begin(), column.end());
    e.q05 = quantile(column, 0.05);
    e.q50 = quantile(column, 0.50);
    e.q95 = quantile(column, 0.95);
    report.summary.push_back(e);
  }
  return report;
}

Graph first_entrants(const Graph& g, std::span<const int> entry_times, Vertex m) {
  std::vector<Vertex> keep(static_cast<std::size_t>(m));
  for (std::size_t v = 0; v < entry_times.size(); ++v) {
    const int t = entry_times[v];
    if (t >= 1 && t <= m) keep[static_cast<std::size_t>(t - 1)] = static_cast<Vertex>(v);
  }
  return g.induced_subgraph(keep);
}

}  // namespace

std::string_view gof_stat_name(GofStat stat) {
  for (const auto& [s, name] : kNames) {
    if (s == stat) return name;
  }
  return "unknown";
}

std::optional<GofStat> gof_stat_from_name(std::string_view name) {
  for (const auto& [s, n] : kNames) {
    if (n == name) return s;
  }
  return std::nullopt;
}

std::vector<double> gof_values(GofStat stat, const Graph& g) {
  switch (stat) {
    case GofStat::degree:
      return as_double(degree_distribution(g));
    case GofStat::esp:
      return as_double(esp_distribution(g));
    case GofStat::edges:
      return {static_cast<double>(g.edge_count())};
    case GofStat::triangles:
      return {static_cast<double>(triangle_count(g))};
    case GofStat::two_stars:
      return {static_cast<double>(two_star_count(g))};
    case GofStat::transitivity:
      return {transitivity(g)};
    case GofStat::sv_transitivity:
      return {sv_transitivity(g)};
  }
  return {};
}

LogBins log_bin(std::span<const double> counts) {
  LogBins out;
  for (std::size_t lo = 0; lo < counts.size();) {
    const std::size_t hi = lo == 0 ? 0 : 2 * lo - 1;
    double sum = 0.0;
    for (std::size_t d = lo; d <= hi && d < counts.size(); ++d) sum += counts[d];
    out.labels.push_back(lo == 0 ? 0.0 : std::sqrt(static_cast<double>(lo) * static_cast<double>(hi)));
    out.counts.push_back(sum);
    lo = lo == 0 ? 1 : 2 * lo;
  }
  return out;
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw InvalidArgument("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("quantile level must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<GofReport> gof_run(const FitResult& fit, const Model& model, const Graph& observed,
                               const GofOptions& options) {
  model.validate();
  if (options.r < 1) throw InvalidArgument("gof needs at least one simulation");
  if (static_cast<std::size_t>(fit.theta.size()) != model.size()) {
    throw InvalidArgument("fitted parameters do not match the model");
  }
  if (observed.size() != model.n || observed.directed() != model.directed) {
    throw InvalidArgument("observed graph does not match the model's vertex set");
  }
  if (!options.growth_checkpoints.empty() && model.order.mode != OrderMode::vertex_entry) {
    throw InvalidArgument("growth checkpoints need a vertex-entry ordering");
  }
  for (Vertex m : options.growth_checkpoints) {
    if (m < 1 || m > model.n) throw InvalidArgument("growth checkpoint " + std::to_string(m) + " is out of range");
  }

  // Slots: full graph, then each checkpoint; within each, one entry per statistic.
  const std::size_t slots = 1 + options.growth_checkpoints.size();
  std::vector<std::vector<Rows>> rows(slots, std::vector<Rows>(options.stats.size()));
  for (auto& slot : rows) {
    for (auto& r : slot) r.simulated.resize(static_cast<std::size_t>(options.r));
  }

  auto record = [&](const Graph& g, std::span<const int> entry, auto&& sink) {
    for (std::size_t s = 0; s < options.stats.size(); ++s) sink(0, s, gof_values(options.stats[s], g));
    for (std::size_t c = 0; c < options.growth_checkpoints.size(); ++c) {
      if (entry.empty()) continue;
      const Graph sub = first_entrants(g, entry, options.growth_checkpoints[c]);
      for (std::size_t s = 0; s < options.stats.size(); ++s) sink(c + 1, s, gof_values(options.stats[s], sub));
    }
  };

  std::vector<int> observed_entry;
  if (model.order.mode == OrderMode::vertex_entry && model.order.entry_observed()) {
    observed_entry.resize(static_cast<std::size_t>(model.n));
    int t = 1;
    for (const auto& group : model.order.entry_groups) observed_entry[static_cast<std::size_t>(group.front())] = t++;
  }
  record(observed, observed_entry, [&](std::size_t slot, std::size_t s, std::vector<double> v) {
    rows[slot][s].observed = std::move(v);
  });

  SampleOptions sopts;
  sopts.record_order = false;
  sopts.accumulate_expectations = false;
  const int chunk = std::max(1, 4 * resolve_threads(options.threads));
  for (int start = 0; start < options.r; start += chunk) {
    const int count = std::min(chunk, options.r - start);
    // Replicate i always uses derive_seed(seed, i), whatever the chunking.
    const auto batch = sample_batch(model, fit.theta, count, options.seed, sopts, options.threads, start);
    for (int i = 0; i < count; ++i) {
      const auto& d = batch[static_cast<std::size_t>(i)];
      record(d.graph, d.order.entry_times, [&](std::size_t slot, std::size_t s, std::vector<double> v) {
        rows[slot][s].simulated[static_cast<std::size_t>(start + i)] = std::move(v);
      });
    }
  }

  std::vector<GofReport> reports;
  for (std::size_t slot = 0; slot < slots; ++slot) {
    const Vertex checkpoint = slot == 0 ? 0 : options.growth_checkpoints[slot - 1];
    for (std::size_t s = 0; s < options.stats.size(); ++s) {
      reports.push_back(summarize(options.stats[s], checkpoint, std::move(rows[slot][s]), options.log_bins));
    }
  }
  return reports;
}

}  // namespace lolog
