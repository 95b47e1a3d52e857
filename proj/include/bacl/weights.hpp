#pragma once

// Chung-Lu weight derivation from Barabasi-Albert ensembles.
//
// Degree vectors of independent BA samples (aligned by vertex creation order)
// are accumulated in batches. After round t the estimate is the mean of the
// first batch*t samples; derivation stops at the first round t+1 whose
// estimate differs from round t's by at most epsilon in the sup norm.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "bacl/error.hpp"
#include "bacl/generators.hpp"
#include "bacl/graph.hpp"
#include "bacl/parallel.hpp"
#include "bacl/rng.hpp"

namespace bacl {

struct DerivationConfig {
  std::size_t n = 0;
  std::size_t m0 = 0;
  std::size_t batch = 300;
  double epsilon = 0.05;
  Seed seed{};
  std::size_t max_rounds = 200;
  std::size_t workers = 1;
};

struct DerivationResult {
  WeightVector w_bar;
  std::size_t rounds = 0;
  std::vector<double> sup_deltas;  // one entry per round after the first
  bool converged = false;
};

class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& message, DerivationResult partial)
      : Error(ErrorKind::non_convergence, message), partial_(std::move(partial)) {}

  const DerivationResult& partial() const noexcept { return partial_; }

 private:
  DerivationResult partial_;
};

/// In-place incremental mean: mean <- mean + (sample - mean) / (count + 1).
inline void running_mean_update(std::span<double> mean, std::size_t count,
                                std::span<const double> sample) {
  require(mean.size() == sample.size(), ErrorKind::dimension,
          "running_mean_update: length mismatch");
  const double inv = 1.0 / static_cast<double>(count + 1);
  for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += (sample[i] - mean[i]) * inv;
}

inline std::vector<double> running_mean_update(std::vector<double> mean, std::size_t count,
                                               const std::vector<double>& sample) {
  running_mean_update(std::span<double>(mean), count, std::span<const double>(sample));
  return mean;
}

inline double sup_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

/// Seed for the j-th BA sample (0-based, global across rounds).
inline Seed derivation_sample_seed(Seed master, std::size_t j) {
  return derive_seed(master, {0x77656967ULL, j});
}

inline DerivationResult derive_weights(const DerivationConfig& cfg) {
  require(cfg.batch >= 1, ErrorKind::config, "derive_weights: batch must be >= 1");
  require(cfg.epsilon > 0.0, ErrorKind::config, "derive_weights: epsilon must be > 0");
  require(cfg.max_rounds >= 2, ErrorKind::config, "derive_weights: max_rounds must be >= 2");
  require(cfg.m0 >= 1 && cfg.m0 < cfg.n, ErrorKind::parameter,
          "derive_weights requires 1 <= m0 < n");

  const std::size_t n = cfg.n;
  std::vector<double> mean(n, 0.0);
  std::vector<double> previous;
  std::vector<std::vector<double>> batch(cfg.batch, std::vector<double>(n));
  std::size_t count = 0;
  DerivationResult result;

  for (std::size_t round = 1; round <= cfg.max_rounds; ++round) {
    parallel_for(cfg.batch, cfg.workers, [&](std::size_t k) {
      const Graph g = generate_ba(n, cfg.m0, derivation_sample_seed(cfg.seed, count + k));
      for (std::size_t v = 0; v < n; ++v) batch[k][v] = static_cast<double>(g.degree(v));
    });
    previous = mean;
    for (const auto& sample : batch) running_mean_update(std::span<double>(mean), count++, sample);
    result.rounds = round;
    if (round == 1) continue;
    const double delta = sup_distance(previous, mean);
    result.sup_deltas.push_back(delta);
    if (delta <= cfg.epsilon) {
      result.w_bar = WeightVector(std::move(mean));
      result.converged = true;
      return result;
    }
  }
  result.w_bar = WeightVector(std::move(mean));
  std::string message = "derive_weights: no convergence within " +
                        std::to_string(cfg.max_rounds) + " rounds (last sup delta " +
                        std::to_string(result.sup_deltas.back()) + ")";
  throw NonConvergenceError(std::move(message), std::move(result));
}

// Weight CSV: header "vertex_id,w", one row per vertex, full precision.

inline void write_weights_csv(std::ostream& os, const WeightVector& w) {
  os << "vertex_id,w\n" << std::setprecision(17);
  for (std::size_t i = 0; i < w.size(); ++i) os << i << ',' << w[i] << '\n';
}

inline WeightVector read_weights_csv(std::istream& is) {
  std::string line;
  std::vector<double> w;
  while (std::getline(is, line)) {
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    require(comma != std::string::npos, ErrorKind::io, "malformed weight row: " + line);
    const std::string id = line.substr(0, comma);
    if (id == "vertex_id") continue;
    const std::size_t index = std::stoull(id);
    require(index == w.size(), ErrorKind::io, "weight rows must be in vertex order");
    w.push_back(std::stod(line.substr(comma + 1)));
  }
  return WeightVector(std::move(w));
}

inline void save_weights_csv(const std::string& path, const WeightVector& w) {
  std::ofstream os(path);
  require(static_cast<bool>(os), ErrorKind::io, "cannot open " + path + " for writing");
  write_weights_csv(os, w);
}

inline WeightVector load_weights_csv(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), ErrorKind::io, "cannot open " + path);
  return read_weights_csv(is);
}

}  // namespace bacl
