#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lolog/estimate.hpp"
#include "lolog/model.hpp"

namespace lolog {

enum class GofStat { degree, esp, edges, triangles, two_stars, transitivity, sv_transitivity };

std::string_view gof_stat_name(GofStat stat);
std::optional<GofStat> gof_stat_from_name(std::string_view name);

/// Distributions come back as counts per bin; scalars as a single value.
std::vector<double> gof_values(GofStat stat, const Graph& g);

/// Merges counts indexed by degree into bins {0}, {1}, {2,3}, {4..7}, ...
struct LogBins {
  std::vector<double> labels;   // 0, then the geometric mean of each bin's end points
  std::vector<double> counts;
};
LogBins log_bin(std::span<const double> counts);

/// Sample quantile with linear interpolation between order statistics
/// (the usual "type 7" definition).
double quantile(std::vector<double> values, double p);

struct Envelope {
  double min = 0.0;
  double q05 = 0.0;
  double q50 = 0.0;
  double q95 = 0.0;
  double max = 0.0;
};

struct GofReport {
  std::string statistic;
  Vertex checkpoint = 0;                       // vertices entered; 0 means the full graph
  std::vector<double> bins;                    // bin labels, shared by every row
  std::vector<double> observed;                // empty when unknown at this checkpoint
  std::vector<std::vector<double>> simulated;  // one row per simulation
  std::vector<Envelope> summary;               // per bin
};

struct GofOptions {
  int r = 100;
  std::uint64_t seed = 1;
  std::vector<GofStat> stats{GofStat::degree, GofStat::esp};
  /// Also summarize the subgraph induced by the first m entrants (vertex-entry orders only).
  std::vector<Vertex> growth_checkpoints;
  bool log_bins = false;
  int threads = 0;
};

/// Simulates r graphs at the fitted θ and summarizes each statistic against
/// the observed graph.
std::vector<GofReport> gof_run(const FitResult& fit, const Model& model, const Graph& observed,
                               const GofOptions& options = {});

}  // namespace lolog
