#include "lolog/statistics.hpp"

#include <algorithm>
#include <functional>

namespace lolog {

std::vector<std::int64_t> degree_distribution(const Graph& g) {
  int max_degree = 0;
  for (Vertex v = 0; v < g.size(); ++v) max_degree = std::max(max_degree, g.degree(v));
  std::vector<std::int64_t> counts(static_cast<std::size_t>(max_degree) + 1, 0);
  for (Vertex v = 0; v < g.size(); ++v) ++counts[static_cast<std::size_t>(g.degree(v))];
  return counts;
}

std::vector<std::int64_t> esp_distribution(const Graph& g) {
  std::vector<std::int64_t> counts(1, 0);
  for (const Dyad& e : g.edges()) {
    const auto sn = static_cast<std::size_t>(g.shared_neighbors(e));
    if (sn >= counts.size()) counts.resize(sn + 1, 0);
    ++counts[sn];
  }
  return counts;
}

std::int64_t triangle_count(const Graph& g) {
  std::int64_t total = 0;
  for (const Dyad& e : g.edges()) total += g.shared_neighbors(e);
  // Each triangle is seen once per edge; a directed graph may hold a vertex
  // pair twice, which this projection-based count does not collapse.
  return total / 3;
}

std::int64_t two_star_count(const Graph& g) {
  std::int64_t total = 0;
  for (Vertex v = 0; v < g.size(); ++v) {
    const std::int64_t d = g.degree(v);
    total += d * (d - 1) / 2;
  }
  return total;
}

double transitivity(const Graph& g) {
  const auto stars = two_star_count(g);
  if (stars == 0) return 0.0;
  return 3.0 * static_cast<double>(triangle_count(g)) / static_cast<double>(stars);
}

std::int64_t max_neighbor_links(std::span<const int> neighbor_degrees) {
  const auto k = static_cast<int>(neighbor_degrees.size());
  std::vector<int> cap;
  cap.reserve(neighbor_degrees.size());
  for (int d : neighbor_degrees) cap.push_back(std::clamp(d - 1, 0, std::max(k - 1, 0)));
  std::int64_t links = 0;
  while (true) {
    std::sort(cap.begin(), cap.end(), std::greater<>());
    while (!cap.empty() && cap.back() == 0) cap.pop_back();
    if (cap.size() < 2) break;
    const int take = std::min<int>(cap.front(), static_cast<int>(cap.size()) - 1);
    for (int i = 1; i <= take; ++i) --cap[static_cast<std::size_t>(i)];
    cap.front() = 0;
    links += take;
  }
  return links;
}

double sv_transitivity(const Graph& g) {
  double sum = 0.0;
  std::int64_t counted = 0;
  std::vector<int> degrees;
  for (Vertex v = 0; v < g.size(); ++v) {
    const auto nbrs = g.neighbors(v);
    if (nbrs.size() < 2) continue;
    degrees.clear();
    std::int64_t closed = 0;
    for (Vertex u : nbrs) {
      degrees.push_back(g.degree(u));
      closed += g.shared_neighbors({v, u});
    }
    const auto omega = max_neighbor_links(degrees);
    if (omega == 0) continue;
    sum += static_cast<double>(closed / 2) / static_cast<double>(omega);
    ++counted;
  }
  return counted == 0 ? 0.0 : sum / static_cast<double>(counted);
}

}  // namespace lolog
