#include <gtest/gtest.h>

#include <cmath>

#include "bacl/models.hpp"
#include "bacl/stats.hpp"

namespace bacl {
namespace {

TEST(BaDegreePmf, Values) {
  EXPECT_NEAR(ba_degree_pmf(1, 1), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(ba_degree_pmf(2, 1), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(ba_degree_pmf(4, 4), 2.0 * 4 * 5 / (4.0 * 5 * 6), 1e-15);
  try {
    ba_degree_pmf(2, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::domain);
  }
}

// Direct summation to K = 1e7 plus the telescoped tail
// sum_{k>K} 2 m0 (m0+1) / (k (k+1) (k+2)) = m0 (m0+1) / ((K+1)(K+2)).
TEST(BaDegreePmf, NormalisationAndMean) {
  for (long m0 = 1; m0 <= 6; ++m0) {
    const long kmax = 10000000;
    double total = 0.0, first_moment = 0.0;
    for (long k = kmax; k >= m0; --k) {  // small terms first
      const double p = ba_degree_pmf(k, m0);
      total += p;
      first_moment += static_cast<double>(k) * p;
    }
    const double md = static_cast<double>(m0), K = static_cast<double>(kmax);
    const double tail = md * (md + 1) / ((K + 1) * (K + 2));
    // sum_{k>K} k p(k) = 2 m0 (m0+1) / (K + 2)
    const double mean_tail = 2 * md * (md + 1) / (K + 2);
    EXPECT_NEAR(total + tail, 1.0, 1e-10);
    EXPECT_NEAR(first_moment + mean_tail, 2.0 * md, 1e-6);
    EXPECT_NEAR(ba_degree_cdf(K, m0), total, 1e-10);
  }
}

TEST(BaDegreeQuantile, InvertsCdf) {
  for (long m0 : {1, 4}) {
    for (double u : {0.0, 0.1, 0.333, 0.5, 0.9, 0.999}) {
      const long k = ba_degree_quantile(u, m0);
      EXPECT_GE(ba_degree_cdf(static_cast<double>(k), m0), u);
      if (k > m0) {
        EXPECT_LT(ba_degree_cdf(static_cast<double>(k - 1), m0), u);
      }
    }
  }
}

TEST(ExpectedDegreeDensity, Values) {
  EXPECT_NEAR(expected_degree_density(4, 4), 0.5, 1e-15);
  EXPECT_THROW(expected_degree_density(3.9, 4), Error);
}

// Closed forms: integral = 2 m0^2 / (2 m0^2) = 1, mean = 2 m0^2 / m0 = 2 m0.
TEST(ExpectedDegreeDensity, IntegralAndMean) {
  for (long m0 : {1, 4, 6}) {
    // Substitution d = m0 / s maps [m0, inf) to (0, 1]; integrate with Simpson.
    const int steps = 200000;
    double mass = 0.0, first = 0.0;
    const double md = static_cast<double>(m0);
    for (int i = 0; i <= steps; ++i) {
      const double s = static_cast<double>(i) / steps;
      const double weight = (i == 0 || i == steps) ? 1 : (i % 2 ? 4 : 2);
      // p(m0/s) m0/s^2 = 2 s
      const double f_mass = s == 0 ? 0.0 : expected_degree_density(md / s, m0) * md / (s * s);
      const double f_mean = s == 0 ? 2.0 * md : (md / s) * expected_degree_density(md / s, m0) * md / (s * s);
      mass += weight * f_mass;
      first += weight * f_mean;
    }
    mass /= 3.0 * steps;
    first /= 3.0 * steps;
    EXPECT_NEAR(mass, 1.0, 1e-9);
    EXPECT_NEAR(first, 2.0 * md, 1e-9);
    EXPECT_NEAR(expected_degree_cdf(1e9, m0), 1.0, 1e-12);
  }
}

TEST(ExpectedDegreeDensity, PowerLawShape) {
  std::vector<std::pair<double, double>> pts;
  double previous = 1e300;
  for (double d = 4; d < 4000; d *= 1.7) {
    const double p = expected_degree_density(d, 4);
    EXPECT_GT(p, 0.0);
    EXPECT_LT(p, previous);
    previous = p;
    pts.emplace_back(d, p);
  }
  EXPECT_NEAR(loglog_slope(pts).slope, -3.0, 1e-9);
}

TEST(HistogramCompare, QuantileSamplesAreClose) {
  const int size = 1000000;
  for (long m0 : {1, 4}) {
    std::vector<double> discrete(size), continuous(size);
    for (int i = 0; i < size; ++i) {
      const double u = (i + 0.5) / size;
      discrete[i] = static_cast<double>(ba_degree_quantile(u, m0));
      continuous[i] = expected_degree_quantile(u, m0);
    }
    EXPECT_LT(histogram_compare(discrete, DegreeLawKind::pmf, m0), 0.01);
    EXPECT_LT(histogram_compare(continuous, DegreeLawKind::density, m0), 0.01);
  }
}

// All mass at m0: the empirical CDF is 1 from m0 on while F(m0) = 0.
TEST(HistogramCompare, ConstantSample) {
  const std::vector<double> sample(50, 4.0);
  EXPECT_NEAR(histogram_compare(sample, DegreeLawKind::density, 4), 1.0, 1e-15);
  // Against the pmf the gap at k = m0 is 1 - d(m0) = 1 - 2/(m0+2).
  EXPECT_NEAR(histogram_compare(sample, DegreeLawKind::pmf, 4), 1.0 - 2.0 / 6.0, 1e-15);
}

TEST(HistogramCompare, EmptySample) {
  EXPECT_THROW(histogram_compare(std::vector<double>{}, DegreeLawKind::pmf, 1), Error);
}

}  // namespace
}  // namespace bacl
