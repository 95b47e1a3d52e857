#pragma once

// Adjacency spectra: dense full spectrum, Lanczos extreme eigenvalues and the
// Perron (principal) eigenvector.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bacl/error.hpp"
#include "bacl/graph.hpp"
#include "bacl/rng.hpp"

namespace bacl {

inline constexpr std::size_t kDefaultDenseLimit = 10000;

struct ExtremeEigs {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda_n = 0.0;
};

struct SpectrumSummary {
  std::vector<double> eigenvalues;  // descending; full or {lambda1, lambda2, lambda_n}
  std::optional<std::vector<double>> principal;
};

struct Eigensystem {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // column k belongs to values[k]
};

inline Eigen::MatrixXd dense_adjacency(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.order());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t u = 0; u < g.order(); ++u)
    for (Vertex v : g.neighbors(u)) a(static_cast<Eigen::Index>(u), v) = 1.0;
  return a;
}

inline void require_dense_capacity(std::size_t n, std::size_t limit) {
  require(n <= limit, ErrorKind::capacity,
          "dense eigensolver limited to n <= " + std::to_string(limit) + " (got " +
              std::to_string(n) + ")");
}

/// Descending-ordered eigendecomposition of a dense symmetric matrix.
inline Eigensystem symmetric_eigensystem(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  require(solver.info() == Eigen::Success, ErrorKind::non_convergence,
          "dense symmetric eigensolver failed");
  Eigensystem es;
  es.values = solver.eigenvalues().reverse();
  es.vectors = solver.eigenvectors().rowwise().reverse();
  return es;
}

inline Eigensystem full_eigensystem(const Graph& g, std::size_t dense_limit = kDefaultDenseLimit) {
  require_dense_capacity(g.order(), dense_limit);
  return symmetric_eigensystem(dense_adjacency(g));
}

/// All adjacency eigenvalues in descending order.
inline std::vector<double> full_spectrum(const Graph& g,
                                         std::size_t dense_limit = kDefaultDenseLimit) {
  require_dense_capacity(g.order(), dense_limit);
  if (g.order() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense_adjacency(g),
                                                        Eigen::EigenvaluesOnly);
  require(solver.info() == Eigen::Success, ErrorKind::non_convergence,
          "dense symmetric eigensolver failed");
  std::vector<double> values(solver.eigenvalues().data(),
                             solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

namespace detail {

/// Eigenvector of an unreduced symmetric tridiagonal matrix for the
/// eigenvalue estimate theta, by inverse iteration with a partially pivoted
/// LU factorisation of (T - theta I).
inline Eigen::VectorXd tridiagonal_eigenvector(const std::vector<double>& diag,
                                               const std::vector<double>& off, double theta) {
  const std::size_t k = diag.size();
  Eigen::VectorXd x = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(k));
  if (k == 1) return x;
  double norm = std::abs(theta);
  for (std::size_t i = 0; i < k; ++i) norm = std::max(norm, std::abs(diag[i]));
  for (double b : off) norm = std::max(norm, std::abs(b));
  const double tiny = std::numeric_limits<double>::epsilon() * std::max(norm, 1.0);

  std::vector<double> d(k), dl(off), du(off), du2(k, 0.0);
  std::vector<bool> swapped(k, false);
  for (std::size_t i = 0; i < k; ++i) d[i] = diag[i] - theta;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (std::abs(d[i]) < tiny) d[i] = std::copysign(tiny, d[i] == 0.0 ? 1.0 : d[i]);
      const double fact = dl[i] / d[i];
      dl[i] = fact;
      d[i + 1] -= fact * du[i];
    } else {
      const double fact = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = fact;
      const double temp = du[i];
      du[i] = d[i + 1];
      d[i + 1] = temp - fact * d[i + 1];
      if (i + 2 < k) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du[i + 1];
      }
      swapped[i] = true;
    }
  }
  if (std::abs(d[k - 1]) < tiny) d[k - 1] = std::copysign(tiny, d[k - 1] == 0.0 ? 1.0 : d[k - 1]);

  x.normalize();
  for (int pass = 0; pass < 3; ++pass) {
    for (std::size_t i = 0; i + 1 < k; ++i) {
      if (swapped[i]) std::swap(x[i], x[i + 1]);
      x[i + 1] -= dl[i] * x[i];
    }
    x[k - 1] /= d[k - 1];
    x[k - 2] = (x[k - 2] - du[k - 2] * x[k - 1]) / d[k - 2];
    for (std::size_t i = k - 2; i-- > 0;)
      x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
    x.normalize();
  }
  return x;
}

}  // namespace detail

struct LanczosOptions {
  double tolerance = 1e-10;      // Ritz residual, relative to max(1, |theta|)
  std::size_t max_iterations = 0;  // 0: up to n
  std::size_t check_every = 5;
};

struct LanczosResult {
  double top = 0.0;
  double bottom = 0.0;
  std::optional<Eigen::VectorXd> top_vector;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Symmetric Lanczos with full reorthogonalisation for the largest and
/// smallest eigenvalues of `apply` restricted to the orthogonal complement of
/// `locked` (orthonormal columns). Stops once both extreme Ritz residuals
/// are below tolerance, on breakdown (invariant subspace found), or when the
/// Krylov space fills the available dimension.
template <typename Apply>
LanczosResult lanczos_extremes(std::size_t n, Apply&& apply, Eigen::VectorXd start,
                               const Eigen::MatrixXd& locked, bool want_vector,
                               const LanczosOptions& opts = {}) {
  using Eigen::Index;
  LanczosResult result;
  const auto nn = static_cast<Index>(n);
  const std::size_t free_dim = n - static_cast<std::size_t>(locked.cols());
  const std::size_t limit =
      std::min(free_dim, opts.max_iterations == 0 ? n : opts.max_iterations);

  auto project_out = [&](Eigen::VectorXd& w, const Eigen::MatrixXd& basis, Index cols) {
    if (cols == 0) return;
    const auto b = basis.leftCols(cols);
    const double before = w.norm();
    w.noalias() -= b * (b.transpose() * w);
    // Second pass only when cancellation was severe ("twice is enough").
    if (w.norm() < 0.7071 * before) w.noalias() -= b * (b.transpose() * w);
  };

  if (limit == 0) return result;
  project_out(start, locked, locked.cols());
  project_out(start, locked, locked.cols());
  const double start_norm = start.norm();
  require(start_norm > 0.0, ErrorKind::parameter, "lanczos: start vector lies in locked space");
  start /= start_norm;

  Index capacity = static_cast<Index>(std::min<std::size_t>(limit, 64));
  Eigen::MatrixXd basis(nn, capacity);
  basis.col(0) = start;
  std::vector<double> alpha, beta;
  Eigen::VectorXd w(nn);
  std::vector<double> ritz;

  auto ritz_values = [&]() {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    const auto k = static_cast<Index>(alpha.size());
    Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(alpha.data(), k);
    Eigen::VectorXd e = k > 1 ? Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(beta.data(), k - 1))
                              : Eigen::VectorXd(0);
    tri.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
    return std::vector<double>(tri.eigenvalues().data(), tri.eigenvalues().data() + k);
  };

  for (std::size_t j = 0;; ++j) {
    const auto jj = static_cast<Index>(j);
    apply(basis.col(jj), w);
    if (j > 0) w.noalias() -= beta[j - 1] * basis.col(jj - 1);
    const double a = basis.col(jj).dot(w);
    w.noalias() -= a * basis.col(jj);
    alpha.push_back(a);
    project_out(w, locked, locked.cols());
    project_out(w, basis, jj + 1);
    const double b = w.norm();
    const std::size_t k = j + 1;

    double scale = 1.0;
    for (double v : alpha) scale = std::max(scale, std::abs(v));
    for (double v : beta) scale = std::max(scale, std::abs(v));
    const bool breakdown = b <= 1e-12 * scale;
    const bool exhausted = k >= limit;

    if (breakdown || exhausted || k % opts.check_every == 0) {
      std::vector<double> off(beta.begin(), beta.end());
      ritz = ritz_values();
      const double top = ritz.back();
      const double bottom = ritz.front();
      bool done = breakdown || exhausted;
      Eigen::VectorXd s_top;
      if (!done || want_vector) s_top = detail::tridiagonal_eigenvector(alpha, off, top);
      if (!done) {
        const Eigen::VectorXd s_bottom = detail::tridiagonal_eigenvector(alpha, off, bottom);
        const double r_top = b * std::abs(s_top[static_cast<Index>(k - 1)]);
        const double r_bottom = b * std::abs(s_bottom[static_cast<Index>(k - 1)]);
        done = r_top <= opts.tolerance * std::max(1.0, std::abs(top)) &&
               r_bottom <= opts.tolerance * std::max(1.0, std::abs(bottom));
        result.converged = done;
      } else {
        result.converged = true;
      }
      if (done) {
        result.top = top;
        result.bottom = bottom;
        result.iterations = k;
        if (want_vector) {
          Eigen::VectorXd y = basis.leftCols(static_cast<Index>(k)) * s_top;
          y.normalize();
          result.top_vector = std::move(y);
        }
        return result;
      }
    }

    beta.push_back(b);
    if (static_cast<Index>(k) == capacity) {
      capacity = static_cast<Index>(std::min<std::size_t>(limit, 2 * static_cast<std::size_t>(capacity)));
      basis.conservativeResize(Eigen::NoChange, capacity);
    }
    basis.col(static_cast<Index>(k)) = w / b;
  }
}

inline Eigen::VectorXd perturbed_ones_start(std::size_t n) {
  Eigen::VectorXd x = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
  x[0] += 0.5;
  return x.normalized();
}

inline Eigen::VectorXd pseudo_random_start(std::size_t n) {
  Xoshiro256 rng(Seed{0x5eed5eed5eedULL});
  Eigen::VectorXd x(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = 2.0 * rng.uniform() - 1.0;
  return x.normalized();
}

inline auto adjacency_operator(const Graph& g) {
  return [&g](const auto& x, Eigen::VectorXd& y) {
    const auto offsets = g.offsets();
    const auto targets = g.targets();
    for (std::size_t i = 0; i < g.order(); ++i) {
      double acc = 0.0;
      for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) acc += x[targets[k]];
      y[static_cast<Eigen::Index>(i)] = acc;
    }
  };
}

struct LanczosSpectrum {
  ExtremeEigs eigs;
  Eigen::VectorXd top_vector;
};

/// Two Lanczos runs: the first from the perturbed all-ones vector gives
/// lambda1, its Ritz vector and a bottom estimate; the second, deflated
/// against that Ritz vector, gives lambda2 counting multiplicity (a single
/// Krylov space sees only one direction of a degenerate eigenspace).
inline LanczosSpectrum extreme_eigs_lanczos_full(const Graph& g, const LanczosOptions& opts = {}) {
  const std::size_t n = g.order();
  require(n >= 2, ErrorKind::parameter, "extreme eigenvalues need n >= 2");
  auto op = adjacency_operator(g);
  const Eigen::MatrixXd none(static_cast<Eigen::Index>(n), 0);
  LanczosResult first = lanczos_extremes(n, op, perturbed_ones_start(n), none, true, opts);
  Eigen::MatrixXd locked = *first.top_vector;
  LanczosResult second = lanczos_extremes(n, op, pseudo_random_start(n), locked, false, opts);
  require(first.converged && second.converged, ErrorKind::non_convergence,
          "Lanczos did not converge");
  LanczosSpectrum out;
  out.eigs = {first.top, second.top, std::min(first.bottom, second.bottom)};
  out.top_vector = std::move(*first.top_vector);
  return out;
}

inline ExtremeEigs extreme_eigs_lanczos(const Graph& g, const LanczosOptions& opts = {}) {
  return extreme_eigs_lanczos_full(g, opts).eigs;
}

inline ExtremeEigs extreme_eigs_dense(const Graph& g, std::size_t dense_limit = kDefaultDenseLimit) {
  require(g.order() >= 2, ErrorKind::parameter, "extreme eigenvalues need n >= 2");
  const auto values = full_spectrum(g, dense_limit);
  return {values[0], values[1], values.back()};
}

inline constexpr std::size_t kDenseSwitch = 128;

/// (lambda1, lambda2, lambda_n). Dense for small graphs, Lanczos otherwise.
inline ExtremeEigs extreme_eigs(const Graph& g) {
  return g.order() <= kDenseSwitch ? extreme_eigs_dense(g) : extreme_eigs_lanczos(g);
}

inline constexpr double kDegeneracyGap = 1e-8;

/// Unit eigenvector of lambda1 with nonnegative entries.
///
/// Throws a degeneracy error when lambda1 - lambda2 < 1e-8 (including the
/// edgeless graph). For a simple lambda1 the eigenvector is supported on one
/// connected component; entries elsewhere are numerical noise and are zeroed.
inline std::vector<double> principal_eigenvector(const Graph& g) {
  const std::size_t n = g.order();
  require(n >= 1, ErrorKind::parameter, "principal eigenvector of an empty vertex set");
  if (n == 1) fail(ErrorKind::degeneracy, "principal eigenvector: edgeless graph (lambda1 = 0)");
  require(g.edge_count() > 0, ErrorKind::degeneracy,
          "principal eigenvector: edgeless graph (lambda1 = 0)");
  LanczosSpectrum spec = extreme_eigs_lanczos_full(g);
  const double gap = spec.eigs.lambda1 - spec.eigs.lambda2;
  if (gap < kDegeneracyGap)
    fail(ErrorKind::degeneracy,
         "principal eigenvector: lambda1 - lambda2 = " + std::to_string(gap) + " < 1e-8");

  Eigen::VectorXd& y = spec.top_vector;
  Eigen::Index peak = 0;
  y.cwiseAbs().maxCoeff(&peak);
  if (y[peak] < 0) y = -y;
  const auto labels = connected_components(g);
  const std::size_t home = labels[static_cast<std::size_t>(peak)];
  for (std::size_t i = 0; i < n; ++i)
    if (labels[i] != home) y[static_cast<Eigen::Index>(i)] = 0.0;
  y.normalize();
  return {y.data(), y.data() + y.size()};
}

inline SpectrumSummary summarize_extremes(const Graph& g, bool with_principal) {
  SpectrumSummary s;
  const auto e = extreme_eigs(g);
  s.eigenvalues = {e.lambda1, e.lambda2, e.lambda_n};
  if (with_principal) s.principal = principal_eigenvector(g);
  return s;
}

}  // namespace bacl
