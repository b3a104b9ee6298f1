#include "lolog/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lolog/error.hpp"

namespace lolog {

namespace {

bool sorted_insert(std::vector<Vertex>& set, Vertex v) {
  auto it = std::lower_bound(set.begin(), set.end(), v);
  if (it != set.end() && *it == v) return false;
  set.insert(it, v);
  return true;
}

bool sorted_erase(std::vector<Vertex>& set, Vertex v) {
  auto it = std::lower_bound(set.begin(), set.end(), v);
  if (it == set.end() || *it != v) return false;
  set.erase(it);
  return true;
}

bool sorted_contains(const std::vector<Vertex>& set, Vertex v) {
  return std::binary_search(set.begin(), set.end(), v);
}

int merge_count(std::span<const Vertex> a, std::span<const Vertex> b) {
  int count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

}  // namespace

Graph::Graph(Vertex n, bool directed) : n_(n), directed_(directed) {
  if (n < 1) throw InvalidArgument("graph must have at least one vertex");
  out_.resize(static_cast<std::size_t>(n));
  if (directed_) in_.resize(static_cast<std::size_t>(n));
}

std::int64_t Graph::dyad_count() const noexcept {
  const auto n = static_cast<std::int64_t>(n_);
  return directed_ ? n * (n - 1) : n * (n - 1) / 2;
}

void Graph::check_dyad(Dyad d) const {
  if (d.tail < 0 || d.tail >= n_ || d.head < 0 || d.head >= n_) {
    throw InvalidArgument("dyad (" + std::to_string(d.tail) + "," + std::to_string(d.head) +
                          ") out of range for graph of size " + std::to_string(n_));
  }
  if (d.tail == d.head) {
    throw InvalidArgument("self-loop dyad (" + std::to_string(d.tail) + "," +
                          std::to_string(d.head) + ") is not an edge variable");
  }
}

Dyad Graph::canonical(Dyad d) const {
  check_dyad(d);
  if (!directed_ && d.tail > d.head) std::swap(d.tail, d.head);
  return d;
}

bool Graph::has_edge(Dyad d) const {
  d = canonical(d);
  const auto& a = out_[static_cast<std::size_t>(d.tail)];
  if (directed_) return sorted_contains(a, d.head);
  const auto& b = out_[static_cast<std::size_t>(d.head)];
  return a.size() <= b.size() ? sorted_contains(a, d.head) : sorted_contains(b, d.tail);
}

void Graph::set_edge(Dyad d, bool value) {
  d = canonical(d);
  auto& from = out_[static_cast<std::size_t>(d.tail)];
  auto& to = directed_ ? in_[static_cast<std::size_t>(d.head)] : out_[static_cast<std::size_t>(d.head)];
  if (value) {
    if (sorted_insert(from, d.head)) {
      sorted_insert(to, d.tail);
      ++edge_count_;
    }
  } else {
    if (sorted_erase(from, d.head)) {
      sorted_erase(to, d.tail);
      --edge_count_;
    }
  }
}

int Graph::degree(Vertex v) const {
  const auto i = static_cast<std::size_t>(v);
  const auto out = static_cast<int>(out_.at(i).size());
  return directed_ ? out + static_cast<int>(in_[i].size()) : out;
}

int Graph::out_degree(Vertex v) const { return static_cast<int>(out_.at(static_cast<std::size_t>(v)).size()); }

int Graph::in_degree(Vertex v) const {
  if (!directed_) return out_degree(v);
  return static_cast<int>(in_.at(static_cast<std::size_t>(v)).size());
}

std::span<const Vertex> Graph::neighbors(Vertex v) const { return out_.at(static_cast<std::size_t>(v)); }

std::span<const Vertex> Graph::in_neighbors(Vertex v) const {
  if (!directed_) return neighbors(v);
  return in_.at(static_cast<std::size_t>(v));
}

std::vector<Vertex> Graph::undirected_neighbors(Vertex v) const {
  const auto& a = out_[static_cast<std::size_t>(v)];
  const auto& b = in_[static_cast<std::size_t>(v)];
  std::vector<Vertex> merged;
  merged.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(merged));
  return merged;
}

int Graph::shared_neighbors(Dyad d) const {
  check_dyad(d);
  if (!directed_) return merge_count(neighbors(d.tail), neighbors(d.head));
  const auto a = undirected_neighbors(d.tail);
  const auto b = undirected_neighbors(d.head);
  return merge_count(a, b);
}

Dyad Graph::dyad_at(std::int64_t index) const {
  if (index < 0 || index >= dyad_count()) {
    throw InvalidArgument("dyad index " + std::to_string(index) + " out of range [0, " +
                          std::to_string(dyad_count()) + ")");
  }
  const auto n = static_cast<std::int64_t>(n_);
  if (directed_) {
    const auto tail = index / (n - 1);
    auto head = index % (n - 1);
    if (head >= tail) ++head;
    return {static_cast<Vertex>(tail), static_cast<Vertex>(head)};
  }
  // Row i starts at i*(2n-i-1)/2. Estimate i from the quadratic, then fix up.
  const double b = 2.0 * static_cast<double>(n) - 1.0;
  auto tail = static_cast<std::int64_t>(
      std::floor((b - std::sqrt(b * b - 8.0 * static_cast<double>(index))) / 2.0));
  tail = std::clamp<std::int64_t>(tail, 0, n - 2);
  auto row_start = [n](std::int64_t i) { return i * (2 * n - i - 1) / 2; };
  while (tail > 0 && row_start(tail) > index) --tail;
  while (tail + 1 <= n - 2 && row_start(tail + 1) <= index) ++tail;
  const auto head = tail + 1 + (index - row_start(tail));
  return {static_cast<Vertex>(tail), static_cast<Vertex>(head)};
}

std::int64_t Graph::dyad_index(Dyad d) const {
  d = canonical(d);
  const auto n = static_cast<std::int64_t>(n_);
  const auto i = static_cast<std::int64_t>(d.tail);
  const auto j = static_cast<std::int64_t>(d.head);
  if (directed_) return i * (n - 1) + (j < i ? j : j - 1);
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

std::vector<Dyad> Graph::edges() const {
  std::vector<Dyad> result;
  result.reserve(static_cast<std::size_t>(edge_count_));
  for (Vertex i = 0; i < n_; ++i) {
    for (Vertex j : out_[static_cast<std::size_t>(i)]) {
      if (directed_ || i < j) result.push_back({i, j});
    }
  }
  return result;
}

void Graph::clear() {
  for (auto& s : out_) s.clear();
  for (auto& s : in_) s.clear();
  edge_count_ = 0;
}

Graph Graph::induced_subgraph(std::span<const Vertex> keep) const {
  std::vector<Vertex> position(static_cast<std::size_t>(n_), -1);
  for (std::size_t k = 0; k < keep.size(); ++k) {
    if (keep[k] < 0 || keep[k] >= n_) throw InvalidArgument("vertex id out of range in subgraph");
    position[static_cast<std::size_t>(keep[k])] = static_cast<Vertex>(k);
  }
  Graph sub(static_cast<Vertex>(std::max<std::size_t>(keep.size(), 1)), directed_);
  for (const Dyad& e : edges()) {
    const Vertex a = position[static_cast<std::size_t>(e.tail)];
    const Vertex b = position[static_cast<std::size_t>(e.head)];
    if (a >= 0 && b >= 0) sub.add_edge({a, b});
  }
  return sub;
}

}  // namespace lolog
