#pragma once

// Seeded Barabasi-Albert and Chung-Lu generators.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "bacl/error.hpp"
#include "bacl/graph.hpp"
#include "bacl/rng.hpp"

namespace bacl {

/// Expected-degree vector of the Chung-Lu model. Entries must lie in
/// [0, n-1].
class WeightVector {
 public:
  WeightVector() = default;
  explicit WeightVector(std::vector<double> w) : w_(std::move(w)) {
    require(!w_.empty(), ErrorKind::parameter, "weight vector must be non-empty");
    const double upper = static_cast<double>(w_.size() - 1);
    for (std::size_t i = 0; i < w_.size(); ++i)
      require(std::isfinite(w_[i]) && w_[i] >= 0.0 && w_[i] <= upper, ErrorKind::parameter,
              "weight w[" + std::to_string(i) + "]=" + std::to_string(w_[i]) +
                  " outside [0, n-1]");
  }

  std::size_t size() const noexcept { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  const std::vector<double>& values() const noexcept { return w_; }
  double sum() const { return std::accumulate(w_.begin(), w_.end(), 0.0); }

  friend bool operator==(const WeightVector&, const WeightVector&) = default;

 private:
  std::vector<double> w_;
};

inline double ba_edge_count(std::size_t n, std::size_t m0) {
  return static_cast<double>(m0 * (m0 - 1) / 2 + m0 * (n - m0));
}

/// Barabasi-Albert graph: clique on vertices 0..m0-1, then each vertex
/// v >= m0 attaches to m0 distinct earlier vertices, each drawn with
/// probability proportional to its degree before v's arrival (repeat draws of
/// an already chosen target are rejected). When the total degree is zero (m0 = 1,
/// first step) the target is uniform.
inline Graph generate_ba(std::size_t n, std::size_t m0, Seed seed) {
  require(m0 >= 1 && m0 < n, ErrorKind::parameter,
          "generate_ba requires 1 <= m0 < n (got n=" + std::to_string(n) +
              ", m0=" + std::to_string(m0) + ")");
  Xoshiro256 rng(seed);
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(ba_edge_count(n, m0)));
  // Vertex v appears d_v times; a uniform pick is a degree-proportional pick.
  std::vector<Vertex> endpoints;
  endpoints.reserve(2 * edges.capacity());

  for (Vertex i = 0; i < m0; ++i)
    for (Vertex j = i + 1; j < m0; ++j) {
      edges.emplace_back(i, j);
      endpoints.push_back(i);
      endpoints.push_back(j);
    }

  std::vector<Vertex> chosen;
  chosen.reserve(m0);
  for (std::size_t v = m0; v < n; ++v) {
    chosen.clear();
    const std::size_t wanted = std::min(m0, v);
    while (chosen.size() < wanted) {
      const Vertex t = endpoints.empty()
                           ? static_cast<Vertex>(rng.below(v))
                           : endpoints[rng.below(endpoints.size())];
      if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) chosen.push_back(t);
    }
    for (Vertex t : chosen) {
      edges.emplace_back(t, static_cast<Vertex>(v));
      endpoints.push_back(t);
      endpoints.push_back(static_cast<Vertex>(v));
    }
  }
  return Graph::from_edges(n, std::move(edges));
}

inline void require_positive_mass(const WeightVector& w) {
  require(w.size() >= 1, ErrorKind::parameter, "weight vector must be non-empty");
  require(w.sum() > 0.0, ErrorKind::parameter, "Chung-Lu weights must have positive sum");
}

/// Chung-Lu graph: pair {i, j} is an edge independently with probability
/// min(1, w_i w_j / sum(w)).
///
/// Uses the skip-sampling method of Miller and Hagberg: with weights sorted in
/// decreasing order, the pair probability along a row is non-increasing, so
/// geometric skips at the current probability p followed by acceptance with
/// q/p sample the row exactly. Expected work is O(n + |E|).
inline Graph generate_cl(const WeightVector& w, Seed seed) {
  require_positive_mass(w);
  const std::size_t n = w.size();
  const double total = w.sum();

  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), Vertex{0});
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return w[a] > w[b]; });
  std::vector<double> sorted(n);
  for (std::size_t i = 0; i < n; ++i) sorted[i] = w[order[i]];

  Xoshiro256 rng(seed);
  std::vector<Edge> edges;
  for (std::size_t u = 0; u + 1 < n; ++u) {
    if (sorted[u] <= 0.0) break;
    std::size_t v = u + 1;
    double p = std::min(sorted[u] * sorted[v] / total, 1.0);
    while (v < n && p > 0.0) {
      if (p < 1.0) {
        const double skip = std::floor(std::log(rng.uniform_open()) / std::log1p(-p));
        if (skip >= static_cast<double>(n - v)) break;
        v += static_cast<std::size_t>(skip);
      }
      const double q = std::min(sorted[u] * sorted[v] / total, 1.0);
      if (rng.uniform() < q / p) edges.emplace_back(order[u], order[v]);
      p = q;
      ++v;
    }
  }
  return Graph::from_edges(n, std::move(edges));
}

inline constexpr std::size_t kNaiveClLimit = 5000;

/// Reference Chung-Lu sampler: one Bernoulli trial per pair, O(n^2).
inline Graph generate_cl_naive(const WeightVector& w, Seed seed) {
  require_positive_mass(w);
  const std::size_t n = w.size();
  require(n <= kNaiveClLimit, ErrorKind::capacity,
          "generate_cl_naive is limited to n <= " + std::to_string(kNaiveClLimit));
  const double total = w.sum();
  Xoshiro256 rng(seed);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.uniform() < std::min(w[i] * w[j] / total, 1.0))
        edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(j));
  return Graph::from_edges(n, std::move(edges));
}

}  // namespace bacl
