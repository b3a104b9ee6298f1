#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lolog/graph.hpp"

namespace lolog {

// Whole-graph summaries used as goodness-of-fit and moment statistics.

/// Vertex counts by degree, indexed 0..max degree. Sums to n.
std::vector<std::int64_t> degree_distribution(const Graph& g);

/// Edge counts by number of shared partners of the endpoints. Sums to the edge count.
std::vector<std::int64_t> esp_distribution(const Graph& g);

std::int64_t triangle_count(const Graph& g);

/// Σ_i C(d_i, 2).
std::int64_t two_star_count(const Graph& g);

/// Global transitivity: 3 · triangles / two-stars (0 when there are no two-stars).
double transitivity(const Graph& g);

/// Maximum number of edges among a vertex's neighbors given their degrees:
/// a neighbor with degree d can reach at most min(d - 1, k - 1) of the other
/// k - 1 neighbors. Solved exactly by the Havel-Hakimi style greedy (largest
/// remaining capacity links to the next largest ones).
std::int64_t max_neighbor_links(std::span<const int> neighbor_degrees);

/// Soffer-Vazquez clustering: mean over vertices with ω_i > 0 of T_i / ω_i,
/// where T_i counts edges among the neighbors of i and ω_i is
/// max_neighbor_links of their degrees. Returns 0 when no vertex qualifies.
double sv_transitivity(const Graph& g);

}  // namespace lolog
