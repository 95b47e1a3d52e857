#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "bacl/error.hpp"

namespace bacl {

struct KsResult {
  double d_stat = 0.0;
  double p_value = 1.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
};

/// Kolmogorov survival function Q(z) = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 z^2).
/// For small z the alternating series converges slowly, so the Jacobi theta
/// dual form 1 - sqrt(2 pi)/z sum_{k odd} exp(-k^2 pi^2 / (8 z^2)) is used.
inline double kolmogorov_q(double z) {
  require(z >= 0.0, ErrorKind::domain, "kolmogorov_q: negative argument");
  if (z == 0.0) return 1.0;
  if (z < 1.18) {
    const double y = std::exp(-std::numbers::pi * std::numbers::pi / (8.0 * z * z));
    const double sum = y + std::pow(y, 9) + std::pow(y, 25) + std::pow(y, 49);
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / z * sum, 0.0, 1.0);
  }
  const double x = std::exp(-2.0 * z * z);
  return std::clamp(2.0 * (x - std::pow(x, 4) + std::pow(x, 9)), 0.0, 1.0);
}

/// sup_t |F_x(t) - F_y(t)| over the pooled values (ties handled jointly).
inline double ks_statistic(std::span<const double> x, std::span<const double> y) {
  require(!x.empty() && !y.empty(), ErrorKind::parameter, "KS test needs non-empty samples");
  std::vector<double> a(x.begin(), x.end()), b(y.begin(), y.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double t = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == t) ++i;
    while (j < b.size() && b[j] == t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value
/// Q((sqrt(ne) + 0.12 + 0.11/sqrt(ne)) D), ne = n1 n2 / (n1 + n2).
inline KsResult ks_two_sample(std::span<const double> x, std::span<const double> y) {
  require(x.size() >= 2 && y.size() >= 2, ErrorKind::parameter,
          "KS test needs at least two values per sample");
  KsResult r;
  r.n1 = x.size();
  r.n2 = y.size();
  r.d_stat = ks_statistic(x, y);
  const double ne = static_cast<double>(r.n1) * static_cast<double>(r.n2) /
                    static_cast<double>(r.n1 + r.n2);
  const double root = std::sqrt(ne);
  r.p_value = kolmogorov_q((root + 0.12 + 0.11 / root) * r.d_stat);
  return r;
}

inline double mean(std::span<const double> x) {
  require(!x.empty(), ErrorKind::parameter, "mean of an empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

/// Sample standard deviation (divisor n - 1).
inline double sample_stddev(std::span<const double> x) {
  require(x.size() >= 2, ErrorKind::parameter, "standard deviation needs two values");
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

inline std::vector<double> standardize(std::span<const double> x) {
  require(x.size() >= 2, ErrorKind::parameter, "standardize needs two values");
  const double m = mean(x);
  const double s = sample_stddev(x);
  require(s > 0.0 && std::isfinite(s), ErrorKind::degeneracy,
          "standardize: sample has zero variance");
  std::vector<double> z(x.size());
  std::transform(x.begin(), x.end(), z.begin(), [&](double v) { return (v - m) / s; });
  return z;
}

inline double inf_distance(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), ErrorKind::dimension, "inf_distance: length mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

/// sqrt(1/2 sum (a_i - b_i)^2) for unit vectors; in [0, 1] when both are
/// entrywise nonnegative.
inline double euclid_half_distance(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), ErrorKind::dimension, "euclid_half_distance: length mismatch");
  double na = 0.0, nb = 0.0, ss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    na += a[i] * a[i];
    nb += b[i] * b[i];
    ss += (a[i] - b[i]) * (a[i] - b[i]);
  }
  require(std::abs(std::sqrt(na) - 1.0) <= 1e-6 && std::abs(std::sqrt(nb) - 1.0) <= 1e-6,
          ErrorKind::contract, "euclid_half_distance: inputs must have unit 2-norm");
  return std::sqrt(0.5 * ss);
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares of ln(value) on ln(n).
inline LineFit loglog_slope(std::span<const std::pair<double, double>> points) {
  require(points.size() >= 2, ErrorKind::parameter, "loglog_slope needs at least two points");
  std::vector<double> lx, ly;
  for (const auto& [n, v] : points) {
    require(n > 0.0 && v > 0.0, ErrorKind::domain, "loglog_slope: coordinates must be positive");
    lx.push_back(std::log(n));
    ly.push_back(std::log(v));
  }
  const double mx = mean(lx), my = mean(ly);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  require(sxx > 0.0, ErrorKind::domain, "loglog_slope: n values must be distinct");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

}  // namespace bacl
