#pragma once

// Undirected simple graph in compressed sparse row form.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bacl/error.hpp"

namespace bacl {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;
using DegreeVector = std::vector<std::size_t>;

class Graph {
 public:
  Graph() : offsets_{0} {}

  /// Builds from an arbitrary edge list; orientation, duplicates and order do
  /// not matter. Self-loops and out-of-range endpoints are rejected.
  static Graph from_edges(std::size_t n, std::vector<Edge> edges) {
    for (auto& [u, v] : edges) {
      require(u < n && v < n, ErrorKind::parameter, "edge endpoint out of range");
      require(u != v, ErrorKind::parameter, "self-loop at vertex " + std::to_string(u));
      if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    Graph g;
    g.n_ = n;
    g.edge_count_ = edges.size();
    g.offsets_.assign(n + 1, 0);
    for (const auto& [u, v] : edges) {
      ++g.offsets_[u + 1];
      ++g.offsets_[v + 1];
    }
    std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
    g.targets_.resize(2 * edges.size());
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    // Edges are sorted by (u, v) with u < v, so every vertex receives its
    // lower neighbors first (ascending u), then its higher ones (ascending v).
    for (const auto& [u, v] : edges) {
      g.targets_[cursor[u]++] = v;
      g.targets_[cursor[v]++] = u;
    }
    return g;
  }

  std::size_t order() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edge_count_; }

  std::span<const Vertex> neighbors(std::size_t v) const {
    return {targets_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(std::size_t v) const { return offsets_[v + 1] - offsets_[v]; }

  std::span<const std::size_t> offsets() const noexcept { return offsets_; }
  std::span<const Vertex> targets() const noexcept { return targets_; }

  /// Edges with u < v in ascending lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (std::size_t u = 0; u < n_; ++u)
      for (Vertex v : neighbors(u))
        if (u < v) out.emplace_back(static_cast<Vertex>(u), v);
    return out;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t edge_count_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> targets_;
};

inline DegreeVector degrees(const Graph& g) {
  DegreeVector d(g.order());
  for (std::size_t v = 0; v < g.order(); ++v) d[v] = g.degree(v);
  return d;
}

/// y = A x. Works for any scalar type closed under addition.
template <typename T>
void adjacency_matvec(const Graph& g, std::span<const T> x, std::span<T> y) {
  require(x.size() == g.order() && y.size() == g.order(), ErrorKind::dimension,
          "adjacency_matvec: vector length does not match graph order");
  const auto offsets = g.offsets();
  const auto targets = g.targets();
  for (std::size_t i = 0; i < g.order(); ++i) {
    T acc{};
    for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) acc += x[targets[k]];
    y[i] = acc;
  }
}

template <typename T>
std::vector<T> adjacency_matvec(const Graph& g, const std::vector<T>& x) {
  std::vector<T> y(x.size());
  adjacency_matvec<T>(g, std::span<const T>(x), std::span<T>(y));
  return y;
}

/// Component labels: 0 for the largest component, then by decreasing size,
/// ties broken by the smallest vertex id contained.
inline std::vector<std::size_t> connected_components(const Graph& g) {
  const std::size_t n = g.order();
  constexpr auto unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> raw(n, unset);
  std::vector<std::size_t> sizes;
  std::vector<Vertex> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (raw[s] != unset) continue;
    const std::size_t id = sizes.size();
    std::size_t size = 0;
    raw[s] = id;
    stack.push_back(static_cast<Vertex>(s));
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      ++size;
      for (Vertex w : g.neighbors(v))
        if (raw[w] == unset) {
          raw[w] = id;
          stack.push_back(w);
        }
    }
    sizes.push_back(size);
  }
  // Raw ids are assigned in order of smallest contained vertex, so a stable
  // sort by size yields the required tie-break.
  std::vector<std::size_t> rank(sizes.size());
  std::iota(rank.begin(), rank.end(), 0);
  std::stable_sort(rank.begin(), rank.end(),
                   [&](std::size_t a, std::size_t b) { return sizes[a] > sizes[b]; });
  std::vector<std::size_t> relabel(sizes.size());
  for (std::size_t r = 0; r < rank.size(); ++r) relabel[rank[r]] = r;
  for (auto& label : raw) label = relabel[label];
  return raw;
}

/// Checks the representation invariants: sorted duplicate-free neighbor
/// lists, no self-loops, symmetry, handshake.
inline bool is_valid_simple_graph(const Graph& g) {
  const auto offsets = g.offsets();
  if (offsets.size() != g.order() + 1 || offsets.front() != 0) return false;
  if (offsets.back() != 2 * g.edge_count()) return false;
  for (std::size_t v = 0; v < g.order(); ++v) {
    const auto nbrs = g.neighbors(v);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      if (nbrs[k] >= g.order() || nbrs[k] == v) return false;
      if (k > 0 && nbrs[k - 1] >= nbrs[k]) return false;
      const auto back = g.neighbors(nbrs[k]);
      if (!std::binary_search(back.begin(), back.end(), static_cast<Vertex>(v))) return false;
    }
  }
  return true;
}

// Edge-list text format: "# n=<n>" header, then one "u v" line per edge with
// u < v in ascending order.

inline void write_edge_list(std::ostream& os, const Graph& g) {
  os << "# n=" << g.order() << '\n';
  for (const auto& [u, v] : g.edges()) os << u << ' ' << v << '\n';
}

inline Graph read_edge_list(std::istream& is) {
  std::string line;
  std::size_t n = 0;
  bool have_header = false;
  std::vector<Edge> edges;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto pos = line.find("n=");
      if (pos != std::string::npos) {
        n = std::stoull(line.substr(pos + 2));
        have_header = true;
      }
      continue;
    }
    std::istringstream fields(line);
    std::uint64_t u = 0, v = 0;
    if (!(fields >> u >> v)) fail(ErrorKind::io, "malformed edge line: " + line);
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  require(have_header, ErrorKind::io, "edge list is missing the '# n=<n>' header");
  return Graph::from_edges(n, std::move(edges));
}

inline void save_edge_list(const std::string& path, const Graph& g) {
  std::ofstream os(path);
  require(static_cast<bool>(os), ErrorKind::io, "cannot open " + path + " for writing");
  write_edge_list(os, g);
}

inline Graph load_edge_list(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), ErrorKind::io, "cannot open " + path);
  return read_edge_list(is);
}

}  // namespace bacl
