#pragma once

#include <cstddef>
#include <vector>

#include "bacl/graph.hpp"

namespace bacl::testing {

inline Graph complete_graph(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph::from_edges(n, e);
}

inline Graph path_graph(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph::from_edges(n, e);
}

/// Star K_{1,leaves} with hub 0.
inline Graph star_graph(std::size_t leaves) {
  std::vector<Edge> e;
  for (Vertex i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return Graph::from_edges(leaves + 1, e);
}

inline Graph disjoint_union(const Graph& a, const Graph& b) {
  std::vector<Edge> e = a.edges();
  const auto shift = static_cast<Vertex>(a.order());
  for (auto [u, v] : b.edges()) e.emplace_back(u + shift, v + shift);
  return Graph::from_edges(a.order() + b.order(), e);
}

inline bool handshake_holds(const Graph& g) {
  std::size_t total = 0;
  for (std::size_t v = 0; v < g.order(); ++v) total += g.degree(v);
  return total == 2 * g.edge_count();
}

}  // namespace bacl::testing
