#pragma once

// Closed-form degree laws of the Barabasi-Albert model.
//
//   pmf:     d(k) = 2 m0 (m0 + 1) / (k (k + 1) (k + 2)),  k >= m0
//            CDF  F(k) = 1 - m0 (m0 + 1) / ((k + 1) (k + 2))
//   density: p(d) = 2 m0^2 / d^3,                         d >= m0
//            CDF  F(d) = 1 - m0^2 / d^2, mean 2 m0

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bacl/error.hpp"

namespace bacl {

enum class DegreeLawKind { pmf, density };

inline void require_m0(long m0) {
  require(m0 >= 1, ErrorKind::parameter, "degree law requires m0 >= 1");
}

inline double ba_degree_pmf(long k, long m0) {
  require_m0(m0);
  require(k >= m0, ErrorKind::domain, "ba_degree_pmf: k < m0 is outside the support");
  const double kd = static_cast<double>(k), md = static_cast<double>(m0);
  return 2.0 * md * (md + 1.0) / (kd * (kd + 1.0) * (kd + 2.0));
}

/// P(K <= k); zero below the support.
inline double ba_degree_cdf(double k, long m0) {
  require_m0(m0);
  const double md = static_cast<double>(m0);
  const double kf = std::floor(k);
  if (kf < md) return 0.0;
  return 1.0 - md * (md + 1.0) / ((kf + 1.0) * (kf + 2.0));
}

inline double expected_degree_density(double d, long m0) {
  require_m0(m0);
  const double md = static_cast<double>(m0);
  require(d >= md, ErrorKind::domain, "expected_degree_density: d < m0 is outside the support");
  return 2.0 * md * md / (d * d * d);
}

inline double expected_degree_cdf(double d, long m0) {
  require_m0(m0);
  const double md = static_cast<double>(m0);
  if (d <= md) return 0.0;
  return 1.0 - md * md / (d * d);
}

/// Smallest k with F(k) >= u, for inverse-CDF sampling of the pmf.
inline long ba_degree_quantile(double u, long m0) {
  require_m0(m0);
  require(u >= 0.0 && u < 1.0, ErrorKind::domain, "quantile level must be in [0, 1)");
  const double md = static_cast<double>(m0);
  // F(k) >= u  <=>  (k + 1)(k + 2) >= m0 (m0 + 1) / (1 - u)
  const double target = md * (md + 1.0) / (1.0 - u);
  auto k = static_cast<long>(std::max(md, std::floor((-3.0 + std::sqrt(1.0 + 4.0 * target)) / 2.0)));
  while (k > m0 && ba_degree_cdf(static_cast<double>(k - 1), m0) >= u) --k;
  while (ba_degree_cdf(static_cast<double>(k), m0) < u) ++k;
  return k;
}

inline double expected_degree_quantile(double u, long m0) {
  require_m0(m0);
  require(u >= 0.0 && u < 1.0, ErrorKind::domain, "quantile level must be in [0, 1)");
  return static_cast<double>(m0) / std::sqrt(1.0 - u);
}

/// Sup distance between the sample's empirical CDF and the law's CDF over
/// [m0, max(sample)].
inline double histogram_compare(std::span<const double> sample, DegreeLawKind law, long m0) {
  require(!sample.empty(), ErrorKind::parameter, "histogram_compare: empty sample");
  require_m0(m0);
  std::vector<double> xs(sample.begin(), sample.end());
  std::sort(xs.begin(), xs.end());
  const double total = static_cast<double>(xs.size());
  const double lo = static_cast<double>(m0);
  auto law_cdf = [&](double t) {
    return law == DegreeLawKind::pmf ? ba_degree_cdf(t, m0) : expected_degree_cdf(t, m0);
  };

  double worst = 0.0;
  // Empirical CDF at t counts values <= t.
  auto ecdf = [&](double t) {
    return static_cast<double>(std::upper_bound(xs.begin(), xs.end(), t) - xs.begin()) / total;
  };
  if (xs.back() < lo) return std::abs(ecdf(lo) - law_cdf(lo));
  worst = std::abs(ecdf(lo) - law_cdf(lo));

  if (law == DegreeLawKind::pmf) {
    // Both CDFs are right-continuous step functions with jumps at integers
    // (or sample points); the supremum is attained at one of those points.
    std::vector<double> points(xs.begin(), xs.end());
    for (long k = m0; static_cast<double>(k) <= xs.back(); ++k) points.push_back(static_cast<double>(k));
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    for (double t : points)
      if (t >= lo) worst = std::max(worst, std::abs(ecdf(t) - law_cdf(t)));
    return worst;
  }

  // Continuous law: compare at each distinct sample point from both sides.
  std::size_t i = 0;
  while (i < xs.size()) {
    const double t = xs[i];
    std::size_t j = i;
    while (j < xs.size() && xs[j] == t) ++j;
    if (t >= lo) {
      const double f = law_cdf(t);
      worst = std::max(worst, std::abs(static_cast<double>(j) / total - f));
      if (t > lo) worst = std::max(worst, std::abs(static_cast<double>(i) / total - f));
    }
    i = j;
  }
  return worst;
}

}  // namespace bacl
