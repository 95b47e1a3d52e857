#pragma once

// Continuous-time quantum spatial search.
//
// With M = gamma A + |w><w| and the uniform start |s>, the success
// probability at time t is p(t) = |<w| exp(i t M) |s>|^2. M is real
// symmetric and both |s> and |w> are real, so the sign of the exponent does
// not change p(t).

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bacl/error.hpp"
#include "bacl/graph.hpp"
#include "bacl/parallel.hpp"
#include "bacl/spectra.hpp"
#include "bacl/stats.hpp"

namespace bacl {

inline double jumping_rate(double lambda1) {
  require(lambda1 > 0.0, ErrorKind::parameter,
          "jumping rate needs lambda1 > 0 (edgeless graph?)");
  return 1.0 / lambda1;
}

/// Largest adjacency eigenvalue (single Lanczos run, or dense for tiny n).
inline double largest_eigenvalue(const Graph& g) {
  require(g.order() >= 1, ErrorKind::parameter, "largest eigenvalue of an empty vertex set");
  if (g.order() <= kDenseSwitch) return full_spectrum(g).front();
  const Eigen::MatrixXd none(static_cast<Eigen::Index>(g.order()), 0);
  const auto r = lanczos_extremes(g.order(), adjacency_operator(g), perturbed_ones_start(g.order()),
                                  none, false);
  require(r.converged, ErrorKind::non_convergence, "Lanczos did not converge");
  return r.top;
}

class SearchOperator {
 public:
  SearchOperator(const Graph& g, Vertex marked, double gamma) : graph_(&g), marked_(marked), gamma_(gamma) {
    require(g.order() >= 1, ErrorKind::parameter, "search needs a non-empty graph");
    require(marked < g.order(), ErrorKind::parameter,
            "marked vertex " + std::to_string(marked) + " out of range");
    require(gamma > 0.0 && std::isfinite(gamma), ErrorKind::parameter, "gamma must be > 0");
  }

  /// Operator with gamma = 1 / lambda1(A).
  static SearchOperator with_default_rate(const Graph& g, Vertex marked) {
    return SearchOperator(g, marked, jumping_rate(largest_eigenvalue(g)));
  }

  const Graph& graph() const noexcept { return *graph_; }
  Vertex marked() const noexcept { return marked_; }
  double gamma() const noexcept { return gamma_; }
  std::size_t order() const noexcept { return graph_->order(); }

  /// y = M x.
  template <typename VecIn, typename VecOut>
  void apply(const VecIn& x, VecOut& y) const {
    const auto offsets = graph_->offsets();
    const auto targets = graph_->targets();
    using Scalar = typename VecOut::Scalar;
    for (std::size_t i = 0; i < order(); ++i) {
      Scalar acc{};
      for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) acc += x[targets[k]];
      y[static_cast<Eigen::Index>(i)] = gamma_ * acc;
    }
    y[marked_] += x[marked_];
  }

  Eigen::MatrixXd dense() const {
    Eigen::MatrixXd m = gamma_ * dense_adjacency(*graph_);
    m(marked_, marked_) += 1.0;
    return m;
  }

 private:
  const Graph* graph_;
  Vertex marked_;
  double gamma_;
};

enum class EvolutionBackend { dense, krylov };

struct EvolutionConfig {
  EvolutionBackend backend = EvolutionBackend::krylov;
  double tolerance = 1e-9;
  std::size_t dense_limit = 4096;
  std::size_t krylov_max_dim = 40;
};

struct SearchRun {
  std::vector<double> times;
  std::vector<double> probs;
  double t_opt = 0.0;
  double p_opt = 0.0;
  std::optional<double> expected_time;
};

inline Eigen::VectorXcd uniform_state(std::size_t n) {
  return Eigen::VectorXcd::Constant(static_cast<Eigen::Index>(n),
                                    std::complex<double>(1.0 / std::sqrt(static_cast<double>(n)), 0.0));
}

/// Times 0, dt, 2 dt, ..., up to t_max (inclusive within rounding).
inline std::vector<double> uniform_grid(double t_max, double dt) {
  require(dt > 0.0 && t_max >= 0.0, ErrorKind::parameter, "grid needs dt > 0 and t_max >= 0");
  const auto steps = static_cast<std::size_t>(std::llround(t_max / dt));
  std::vector<double> t(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) t[k] = static_cast<double>(k) * dt;
  return t;
}

/// Spectral propagator: diagonalise M once, then any exp(i t M) |s> costs
/// O(n) for the marked amplitude or O(n^2) for the full state.
class DenseEvolution {
 public:
  explicit DenseEvolution(const SearchOperator& op, std::size_t dense_limit = 4096)
      : marked_(op.marked()) {
    require_dense_capacity(op.order(), dense_limit);
    es_ = symmetric_eigensystem(op.dense());
    const double inv_root = 1.0 / std::sqrt(static_cast<double>(op.order()));
    overlap_ = es_.vectors.colwise().sum().transpose() * inv_root;
    marked_row_ = es_.vectors.row(marked_).transpose();
  }

  std::complex<double> marked_amplitude(double t) const {
    std::complex<double> amp{};
    for (Eigen::Index k = 0; k < es_.values.size(); ++k)
      amp += marked_row_[k] * overlap_[k] * std::polar(1.0, es_.values[k] * t);
    return amp;
  }

  Eigen::VectorXcd state(double t) const {
    Eigen::VectorXcd c(es_.values.size());
    for (Eigen::Index k = 0; k < c.size(); ++k) c[k] = overlap_[k] * std::polar(1.0, es_.values[k] * t);
    return es_.vectors.cast<std::complex<double>>() * c;
  }

 private:
  Eigensystem es_;
  Eigen::VectorXd overlap_;
  Eigen::VectorXd marked_row_;
  Eigen::Index marked_;
};

/// Short-time propagation psi <- exp(i dt M) psi in a Krylov subspace, with
/// the subspace grown until the a posteriori error estimate
/// ||psi|| beta_m |e_m^T exp(i dt T_m) e_1| drops below the step tolerance.
/// Steps that need more than max_dim vectors are split in halves.
class KrylovPropagator {
 public:
  KrylovPropagator(const SearchOperator& op, std::size_t max_dim) : op_(&op), max_dim_(std::max<std::size_t>(max_dim, 4)) {}

  void step(Eigen::VectorXcd& psi, double dt, double tol) const {
    if (dt == 0.0) return;
    if (!try_step(psi, dt, tol)) {
      step(psi, 0.5 * dt, 0.5 * tol);
      step(psi, 0.5 * dt, 0.5 * tol);
    }
  }

 private:
  bool try_step(Eigen::VectorXcd& psi, double dt, double tol) const {
    using Eigen::Index;
    const auto n = static_cast<Index>(op_->order());
    const std::size_t max_dim = std::min<std::size_t>(max_dim_, op_->order());
    const double psi_norm = psi.norm();
    if (psi_norm == 0.0) return true;

    Eigen::MatrixXcd basis(n, static_cast<Index>(max_dim));
    basis.col(0) = psi / psi_norm;
    std::vector<double> alpha, beta;
    Eigen::VectorXcd w(n);

    for (std::size_t j = 0; j < max_dim; ++j) {
      const auto jj = static_cast<Index>(j);
      op_->apply(basis.col(jj), w);
      if (j > 0) w -= beta[j - 1] * basis.col(jj - 1);
      const double a = basis.col(jj).dot(w).real();
      w -= a * basis.col(jj);
      const auto b_prev = basis.leftCols(jj + 1);
      w -= b_prev * (b_prev.adjoint() * w);
      alpha.push_back(a);
      const double b = w.norm();
      const std::size_t m = j + 1;

      const Eigen::VectorXcd u = small_exponential(alpha, beta, dt);
      const double estimate = psi_norm * b * std::abs(u[static_cast<Index>(m - 1)]);
      const bool breakdown = b <= 1e-14 * std::max(1.0, std::abs(a));
      if (breakdown || estimate <= tol || m == op_->order()) {
        psi = psi_norm * (basis.leftCols(static_cast<Index>(m)) * u);
        return true;
      }
      if (m == max_dim) return false;
      beta.push_back(b);
      basis.col(static_cast<Index>(m)) = w / b;
    }
    return false;
  }

  // exp(i dt T) e_1 for the symmetric tridiagonal T = tridiag(beta, alpha, beta).
  static Eigen::VectorXcd small_exponential(const std::vector<double>& alpha,
                                            const std::vector<double>& beta, double dt) {
    const auto m = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) t(i, i) = alpha[static_cast<std::size_t>(i)];
    for (Eigen::Index i = 0; i + 1 < m; ++i)
      t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    Eigen::VectorXcd c(m);
    for (Eigen::Index k = 0; k < m; ++k)
      c[k] = es.eigenvectors()(0, k) * std::polar(1.0, es.eigenvalues()[k] * dt);
    return es.eigenvectors().cast<std::complex<double>>() * c;
  }

  const SearchOperator* op_;
  std::size_t max_dim_;
};

inline void require_search_grid(std::span<const double> times) {
  require(!times.empty() && times.front() == 0.0, ErrorKind::parameter,
          "time grid must start at 0");
  for (std::size_t k = 1; k < times.size(); ++k)
    require(times[k] > times[k - 1], ErrorKind::parameter, "time grid must be ascending");
}

/// Full evolved states on the grid (dense backend); for invariant checks.
inline std::vector<Eigen::VectorXcd> evolved_states(const SearchOperator& op, std::span<const double> times,
                                                    const EvolutionConfig& cfg = {}) {
  require_search_grid(times);
  std::vector<Eigen::VectorXcd> states;
  states.reserve(times.size());
  if (cfg.backend == EvolutionBackend::dense) {
    DenseEvolution evo(op, cfg.dense_limit);
    for (double t : times) states.push_back(evo.state(t));
    return states;
  }
  KrylovPropagator prop(op, cfg.krylov_max_dim);
  Eigen::VectorXcd psi = uniform_state(op.order());
  const double step_tol = cfg.tolerance / (2.0 * static_cast<double>(std::max<std::size_t>(times.size(), 1)));
  double now = 0.0;
  for (double t : times) {
    prop.step(psi, t - now, step_tol);
    now = t;
    states.push_back(psi);
  }
  return states;
}

/// p(t) on the given grid; the returned run has probabilities filled and no
/// optimum chosen yet.
inline SearchRun success_probabilities(const SearchOperator& op, std::span<const double> times,
                                       const EvolutionConfig& cfg = {}) {
  require_search_grid(times);
  require(cfg.tolerance > 0.0, ErrorKind::config, "evolution tolerance must be > 0");
  SearchRun run;
  run.times.assign(times.begin(), times.end());
  run.probs.reserve(times.size());
  const double initial = 1.0 / static_cast<double>(op.order());
  if (cfg.backend == EvolutionBackend::dense) {
    DenseEvolution evo(op, cfg.dense_limit);
    for (double t : times)
      run.probs.push_back(t == 0.0 ? initial : std::clamp(std::norm(evo.marked_amplitude(t)), 0.0, 1.0));
    return run;
  }
  KrylovPropagator prop(op, cfg.krylov_max_dim);
  Eigen::VectorXcd psi = uniform_state(op.order());
  const double step_tol = cfg.tolerance / (2.0 * static_cast<double>(times.size()));
  double now = 0.0;
  for (double t : times) {
    prop.step(psi, t - now, step_tol);
    now = t;
    run.probs.push_back(t == 0.0 ? initial : std::clamp(std::norm(psi[op.marked()]), 0.0, 1.0));
  }
  return run;
}

struct OptimalTime {
  std::size_t index = 0;
  double t_opt = 0.0;
  double p_opt = 0.0;
  bool fallback = false;  // no index met the rule; global maximum returned
};

/// First grid index k whose probability is never later exceeded by a
/// relative margin: (p_j - p_k) / p_j < rel_tol for all j > k.
inline OptimalTime optimal_time_plateau(const SearchRun& run, double rel_tol = 0.2) {
  require(!run.probs.empty() && run.probs.size() == run.times.size(), ErrorKind::parameter,
          "plateau rule needs a non-empty run");
  const auto& p = run.probs;
  for (std::size_t k = 0; k < p.size(); ++k) {
    bool holds = true;
    for (std::size_t j = k + 1; j < p.size() && holds; ++j)
      holds = p[j] <= p[k] || (p[j] - p[k]) / p[j] < rel_tol;
    if (holds) return {k, run.times[k], p[k], false};
  }
  const auto best = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
  return {best, run.times[best], p[best], true};
}

struct ExpectedTime {
  std::size_t index = 0;
  double t_opt = 0.0;
  double p_opt = 0.0;
  double expected_time = 0.0;
};

inline constexpr double kNegligibleProbability = 1e-12;

/// Grid point minimising (t + coeff ln n) / p(t); ties go to the earlier time.
inline ExpectedTime optimal_expected_time(const SearchRun& run, std::size_t n, double coeff = 0.1) {
  require(!run.probs.empty() && run.probs.size() == run.times.size(), ErrorKind::parameter,
          "expected-time rule needs a non-empty run");
  require(n >= 1, ErrorKind::parameter, "expected-time rule needs n >= 1");
  const double overhead = coeff * std::log(static_cast<double>(n));
  std::optional<ExpectedTime> best;
  for (std::size_t k = 0; k < run.probs.size(); ++k) {
    if (run.probs[k] < kNegligibleProbability) continue;
    const double value = (run.times[k] + overhead) / run.probs[k];
    if (!best || value < best->expected_time) best = ExpectedTime{k, run.times[k], run.probs[k], value};
  }
  require(best.has_value(), ErrorKind::degeneracy,
          "expected-time rule: every probability is below 1e-12");
  return *best;
}

/// Grid t = 0, 0.01 pi sqrt(n), ..., pi sqrt(n).
inline std::vector<double> scaling_grid(std::size_t n) {
  const double t_max = std::numbers::pi * std::sqrt(static_cast<double>(n));
  std::vector<double> t(101);
  for (std::size_t k = 0; k <= 100; ++k) t[k] = t_max * static_cast<double>(k) / 100.0;
  return t;
}

/// One search with gamma = 1/lambda1 on the scaling grid, scored by the
/// minimal expected time.
inline SearchRun expected_time_search(const Graph& g, Vertex marked, double coeff,
                                      const EvolutionConfig& cfg = {}) {
  const SearchOperator op = SearchOperator::with_default_rate(g, marked);
  SearchRun run = success_probabilities(op, scaling_grid(g.order()), cfg);
  const auto best = optimal_expected_time(run, g.order(), coeff);
  run.t_opt = best.t_opt;
  run.p_opt = best.p_opt;
  run.expected_time = best.expected_time;
  return run;
}

struct ScalingRow {
  std::size_t n = 0;
  std::vector<double> expected_times;  // per trial
  double mean_expected_time = 0.0;
};

struct ScalingResult {
  LineFit fit;
  std::vector<ScalingRow> table;
};

/// Averages trial(n, t) over trials for every order and fits
/// log(mean expected time) against log(n).
inline ScalingResult search_scaling(std::span<const std::size_t> orders, std::size_t trials,
                                    const std::function<double(std::size_t, std::size_t)>& trial,
                                    std::size_t workers = 1) {
  require(!orders.empty(), ErrorKind::config, "scaling needs at least one order");
  require(trials >= 1, ErrorKind::config, "scaling needs trials >= 1");
  for (std::size_t k = 1; k < orders.size(); ++k)
    require(orders[k] > orders[k - 1], ErrorKind::config, "orders must be ascending");
  ScalingResult result;
  std::vector<std::pair<double, double>> points;
  for (std::size_t n : orders) {
    ScalingRow row;
    row.n = n;
    row.expected_times.resize(trials);
    parallel_for(trials, workers, [&](std::size_t t) { row.expected_times[t] = trial(n, t); });
    row.mean_expected_time = mean(row.expected_times);
    points.emplace_back(static_cast<double>(n), row.mean_expected_time);
    result.table.push_back(std::move(row));
  }
  result.fit = loglog_slope(points);
  return result;
}

}  // namespace bacl
