#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "bacl/rng.hpp"
#include "bacl/stats.hpp"

namespace bacl {
namespace {

TEST(KsTwoSample, IdenticalSamples) {
  const std::vector<double> x{0.3, 1.2, -4.0, 2.5, 2.5, 7.0};
  const auto r = ks_two_sample(x, x);
  EXPECT_EQ(r.d_stat, 0.0);
  EXPECT_GE(r.p_value, 0.99);
  EXPECT_EQ(r.n1, 6u);
}

TEST(KsTwoSample, DisjointSupports) {
  const auto r = ks_two_sample(std::vector<double>{1, 2}, std::vector<double>{3, 4});
  EXPECT_EQ(r.d_stat, 1.0);
  const std::vector<double> lo(500, 0.0), hi(500, 1.0);
  EXPECT_LT(ks_two_sample(lo, hi).p_value, 1e-100);
}

TEST(KsTwoSample, AlternateSplitOfOneList) {
  std::vector<double> x, y;
  Xoshiro256 rng(Seed{3});
  std::vector<double> list(200);
  for (auto& v : list) v = rng.normal();
  std::sort(list.begin(), list.end());
  for (std::size_t i = 0; i < list.size(); ++i) (i % 2 ? y : x).push_back(list[i]);
  const auto r = ks_two_sample(x, y);
  EXPECT_NEAR(r.d_stat, 0.01, 1e-15);  // x leads y by exactly one point
  EXPECT_GT(r.p_value, 0.5);
}

TEST(KsTwoSample, Errors) {
  EXPECT_THROW(ks_two_sample(std::vector<double>{}, std::vector<double>{1, 2}), Error);
  EXPECT_THROW(ks_two_sample(std::vector<double>{1}, std::vector<double>{1, 2}), Error);
}

TEST(KsTwoSample, SymmetricAndMonotoneInvariant) {
  Xoshiro256 rng(Seed{8});
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> x(37), y(52);
    for (auto& v : x) v = rng.normal();
    for (auto& v : y) v = 0.3 + rng.normal();
    const double d = ks_statistic(x, y);
    EXPECT_EQ(d, ks_statistic(y, x));
    std::vector<double> ex(x.size()), ey(y.size());
    std::transform(x.begin(), x.end(), ex.begin(), [](double v) { return std::exp(3 * v) + 1; });
    std::transform(y.begin(), y.end(), ey.begin(), [](double v) { return std::exp(3 * v) + 1; });
    EXPECT_NEAR(ks_statistic(ex, ey), d, 1e-15);
  }
}

// Brute-force D over all C(10,5) rank arrangements, and the exact
// permutation null distribution for n1 = n2 = 5.
TEST(KsTwoSample, ExactEnumerationSmallSamples) {
  std::map<int, int> tally;  // 5 D -> count
  int arrangements = 0;
  for (unsigned mask = 0; mask < 1024; ++mask) {
    if (__builtin_popcount(mask) != 5) continue;
    ++arrangements;
    std::vector<double> x, y;
    for (int r = 0; r < 10; ++r) ((mask >> r) & 1 ? x : y).push_back(static_cast<double>(r));
    double brute = 0.0;
    for (int t = 0; t < 10; ++t) {
      const double fx = static_cast<double>(std::count_if(x.begin(), x.end(), [&](double v) { return v <= t; })) / 5.0;
      const double fy = static_cast<double>(std::count_if(y.begin(), y.end(), [&](double v) { return v <= t; })) / 5.0;
      brute = std::max(brute, std::abs(fx - fy));
    }
    const double d = ks_two_sample(x, y).d_stat;
    EXPECT_NEAR(d, brute, 1e-15);
    ++tally[static_cast<int>(std::lround(5 * d))];
  }
  ASSERT_EQ(arrangements, 252);
  // Asymptotic p against the exact tail P(D >= d).
  int at_least = arrangements;
  double previous_p = 2.0;
  for (const auto& [five_d, count] : tally) {
    const double exact = static_cast<double>(at_least) / arrangements;
    std::vector<double> x{0, 1, 2, 3, 4}, y;
    for (int k = 0; k < 5; ++k) y.push_back(k + five_d);  // realises D = five_d / 5
    const double p = ks_two_sample(x, y).p_value;
    EXPECT_NEAR(ks_statistic(x, y), five_d / 5.0, 1e-15);
    EXPECT_NEAR(p, exact, 0.2) << "D=" << five_d / 5.0;
    EXPECT_LE(p, exact + 1e-12);  // asymptotic tail is anti-conservative here
    EXPECT_LT(p, previous_p);
    previous_p = p;
    at_least -= count;
  }
}

TEST(KsTwoSample, NullUniformity) {
  Xoshiro256 rng(Seed{2718});
  int below = 0;
  const int reps = 2000;
  for (int r = 0; r < reps; ++r) {
    std::vector<double> x(200), y(200);
    for (auto& v : x) v = rng.normal();
    for (auto& v : y) v = rng.normal();
    below += ks_two_sample(x, y).p_value < 0.1;
  }
  const double frac = below / static_cast<double>(reps);
  EXPECT_GE(frac, 0.07);
  EXPECT_LE(frac, 0.13);
}

TEST(KolmogorovQ, BranchesAgree) {
  // Series and theta forms evaluated at the switch point.
  const double z = 1.18;
  const double x = std::exp(-2 * z * z);
  const double series = 2 * (x - std::pow(x, 4) + std::pow(x, 9) - std::pow(x, 16));
  EXPECT_NEAR(kolmogorov_q(z), series, 1e-12);
  EXPECT_NEAR(kolmogorov_q(z - 1e-9), series, 1e-8);
  EXPECT_EQ(kolmogorov_q(0.0), 1.0);
  EXPECT_NEAR(kolmogorov_q(0.1), 1.0, 1e-12);
}

TEST(Standardize, Examples) {
  EXPECT_EQ(standardize(std::vector<double>{1, 2, 3}), (std::vector<double>{-1, 0, 1}));
  try {
    standardize(std::vector<double>{5, 5, 5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degeneracy);
  }
}

TEST(Standardize, IdempotentWithUnitMoments) {
  Xoshiro256 rng(Seed{5});
  std::vector<double> x(73);
  for (auto& v : x) v = 10 + 3 * rng.normal();
  const auto z = standardize(x);
  EXPECT_NEAR(mean(z), 0.0, 1e-12);
  EXPECT_NEAR(sample_stddev(z), 1.0, 1e-12);
  const auto zz = standardize(z);
  for (std::size_t i = 0; i < z.size(); ++i) EXPECT_NEAR(zz[i], z[i], 1e-12);
}

TEST(VectorDistances, Examples) {
  const std::vector<double> e1{1, 0}, e2{0, 1}, a{0.6, 0.8}, b{0.8, 0.6};
  EXPECT_EQ(inf_distance(a, a), 0.0);
  EXPECT_EQ(inf_distance(e1, e2), 1.0);
  EXPECT_NEAR(inf_distance(a, b), 0.2, 1e-15);
  EXPECT_EQ(euclid_half_distance(a, a), 0.0);
  EXPECT_NEAR(euclid_half_distance(e1, e2), 1.0, 1e-15);
  const double r = 1 / std::sqrt(2.0);
  const std::vector<double> c{r, r};
  EXPECT_NEAR(euclid_half_distance(e1, c), std::sqrt(0.5 * ((1 - r) * (1 - r) + 0.5)), 1e-15);
  EXPECT_NEAR(euclid_half_distance(e1, c), 0.5412, 1e-4);
}

TEST(VectorDistances, Errors) {
  const std::vector<double> a{1, 0}, b{1, 0, 0}, half{0.5, 0};
  EXPECT_THROW(inf_distance(a, b), Error);
  EXPECT_THROW(euclid_half_distance(a, b), Error);
  try {
    euclid_half_distance(a, half);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::contract);
  }
}

TEST(VectorDistances, BoundsOnRandomNonnegativeUnitVectors) {
  Xoshiro256 rng(Seed{6});
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> a(20), b(20);
    for (auto& v : a) v = rng.uniform() * (rng.uniform() < 0.3);
    for (auto& v : b) v = rng.uniform();
    a[rep % 20] += 0.1;
    auto normalize = [](std::vector<double>& v) {
      double s = 0;
      for (double x : v) s += x * x;
      for (double& x : v) x /= std::sqrt(s);
    };
    normalize(a);
    normalize(b);
    const double e = euclid_half_distance(a, b);
    EXPECT_LE(e, 1.0 + 1e-12);
    EXPECT_LE(inf_distance(a, b), 2.0 * e + 1e-12);
  }
}

TEST(LoglogSlope, Examples) {
  std::vector<std::pair<double, double>> root, flat, linear;
  for (double n : {16.0, 64.0, 256.0, 1024.0, 5000.0}) {
    root.emplace_back(n, std::sqrt(n));
    flat.emplace_back(n, 7.0);
    linear.emplace_back(n, 3.0 * n);
  }
  EXPECT_NEAR(loglog_slope(root).slope, 0.5, 1e-10);
  EXPECT_NEAR(loglog_slope(flat).slope, 0.0, 1e-12);
  const auto fit = loglog_slope(linear);
  EXPECT_NEAR(fit.slope, 1.0, 1e-12);
  EXPECT_NEAR(fit.intercept, std::log(3.0), 1e-12);
}

TEST(LoglogSlope, DomainErrors) {
  const std::vector<std::pair<double, double>> bad{{1.0, 1.0}, {2.0, 0.0}};
  try {
    loglog_slope(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::domain);
  }
  EXPECT_THROW(loglog_slope(std::vector<std::pair<double, double>>{{1.0, 1.0}}), Error);
}

TEST(Mean, Examples) {
  EXPECT_EQ(mean(std::vector<double>{1, 2, 3}), 2.0);
  EXPECT_EQ(mean(std::vector<double>{-1, 1}), 0.0);
  EXPECT_EQ(mean(std::vector<double>{5}), 5.0);
  EXPECT_THROW(mean(std::vector<double>{}), Error);
}

}  // namespace
}  // namespace bacl
