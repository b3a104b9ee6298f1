#pragma once

#include <cstdint>
#include <vector>

#include "lolog/error.hpp"
#include "lolog/model.hpp"
#include "lolog/numerics.hpp"
#include "lolog/rng.hpp"

namespace lolog::test {

inline Model make_model(Vertex n, std::vector<TermSpec> terms, OrderSpec order = OrderSpec::uniform(),
                        bool directed = false) {
  Model m;
  m.n = n;
  m.directed = directed;
  m.terms = std::move(terms);
  m.order = std::move(order);
  return m;
}

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

inline Graph random_graph(Vertex n, double p, std::uint64_t seed, bool directed = false) {
  Rng rng(seed);
  Graph g(n, directed);
  for (std::int64_t i = 0; i < g.dyad_count(); ++i) {
    if (uniform01(rng) < p) g.add_edge(g.dyad_at(i));
  }
  return g;
}

inline Graph from_edges(Vertex n, std::initializer_list<Dyad> edges, bool directed = false) {
  Graph g(n, directed);
  for (const Dyad& d : edges) g.add_edge(d);
  return g;
}

}  // namespace lolog::test
