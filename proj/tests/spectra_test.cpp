#include <gtest/gtest.h>

#include <cmath>

#include "bacl/generators.hpp"
#include "bacl/spectra.hpp"
#include "test_support.hpp"

namespace bacl {
namespace {

using testing::complete_graph;
using testing::disjoint_union;
using testing::path_graph;
using testing::star_graph;

const double kRoot2 = std::sqrt(2.0);
const double kRoot3 = std::sqrt(3.0);

void expect_values(const std::vector<double>& got, const std::vector<double>& want, double tol) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], tol) << "index " << i;
}

// Trace, Frobenius and residual identities for a full decomposition.
void check_full_spectrum_identities(const Graph& g) {
  const auto es = full_eigensystem(g);
  const auto values = full_spectrum(g);
  const double n = static_cast<double>(g.order());
  double trace = 0.0, squares = 0.0;
  for (double v : values) {
    trace += v;
    squares += v * v;
  }
  EXPECT_NEAR(trace, 0.0, 1e-8 * n);
  EXPECT_NEAR(squares, 2.0 * static_cast<double>(g.edge_count()), 1e-6 * static_cast<double>(g.edge_count()));
  EXPECT_TRUE(std::is_sorted(values.rbegin(), values.rend()));
  const Eigen::MatrixXd a = dense_adjacency(g);
  const double scale = std::max(1.0, std::abs(values.front()));
  for (Eigen::Index k = 0; k < es.values.size(); ++k) {
    EXPECT_NEAR(es.values[k], values[static_cast<std::size_t>(k)], 1e-10 * scale);
    EXPECT_LE((a * es.vectors.col(k) - es.values[k] * es.vectors.col(k)).norm(), 1e-8 * scale);
  }
}

TEST(FullSpectrum, SmallGraphs) {
  expect_values(full_spectrum(complete_graph(4)), {3, -1, -1, -1}, 1e-12);
  expect_values(full_spectrum(path_graph(3)), {kRoot2, 0, -kRoot2}, 1e-12);
  expect_values(full_spectrum(star_graph(3)), {kRoot3, 0, 0, -kRoot3}, 1e-12);
}

// Independent check of the star: det(A - lambda I) = lambda^2 (lambda^2 - 3)
// vanishes at each computed eigenvalue.
TEST(FullSpectrum, StarCharacteristicPolynomial) {
  const Eigen::MatrixXd a = dense_adjacency(star_graph(3));
  for (double lambda : full_spectrum(star_graph(3))) {
    EXPECT_NEAR((a - lambda * Eigen::MatrixXd::Identity(4, 4)).determinant(), 0.0, 1e-10);
    EXPECT_NEAR(lambda * lambda * (lambda * lambda - 3.0), 0.0, 1e-10);
  }
}

TEST(FullSpectrum, IdentitiesOnRandomGraphs) {
  for (std::size_t m0 : {1, 3, 5}) check_full_spectrum_identities(generate_ba(150, m0, Seed{m0}));
  std::vector<double> w(150, 2.0);
  check_full_spectrum_identities(generate_cl(WeightVector(w), Seed{4}));
}

TEST(FullSpectrum, CapacityError) {
  try {
    full_spectrum(path_graph(20), 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::capacity);
  }
}

void expect_extremes(const ExtremeEigs& e, double l1, double l2, double ln) {
  EXPECT_NEAR(e.lambda1, l1, 1e-9);
  EXPECT_NEAR(e.lambda2, l2, 1e-9);
  EXPECT_NEAR(e.lambda_n, ln, 1e-9);
}

TEST(ExtremeEigs, SmallGraphsBothPaths) {
  const Graph k3k3 = disjoint_union(complete_graph(3), complete_graph(3));
  for (auto solve : {extreme_eigs_dense, +[](const Graph& g, std::size_t) {
                       return extreme_eigs_lanczos(g);
                     }}) {
    expect_extremes(solve(complete_graph(4), kDefaultDenseLimit), 3, -1, -1);
    expect_extremes(solve(path_graph(3), kDefaultDenseLimit), kRoot2, 0, -kRoot2);
    expect_extremes(solve(k3k3, kDefaultDenseLimit), 2, 2, -1);
    expect_extremes(solve(star_graph(3), kDefaultDenseLimit), kRoot3, 0, -kRoot3);
    expect_extremes(solve(complete_graph(2), kDefaultDenseLimit), 1, -1, -1);
  }
}

TEST(ExtremeEigs, NeedsTwoVertices) {
  EXPECT_THROW(extreme_eigs(Graph::from_edges(1, {})), Error);
  EXPECT_THROW(extreme_eigs_lanczos(Graph::from_edges(1, {})), Error);
}

TEST(ExtremeEigs, LanczosMatchesDense) {
  std::vector<Graph> graphs;
  for (std::size_t m0 : {1, 2, 4, 6}) graphs.push_back(generate_ba(600, m0, Seed{10 + m0}));
  for (std::size_t m0 : {1, 4}) {
    std::vector<double> w(600);
    const Graph ref = generate_ba(600, m0, Seed{99});
    for (std::size_t v = 0; v < 600; ++v) w[v] = static_cast<double>(ref.degree(v));
    graphs.push_back(generate_cl(WeightVector(w), Seed{5}));
  }
  // Duplicated large component: lambda1 = lambda2 exactly.
  const Graph big = generate_ba(200, 3, Seed{1});
  graphs.push_back(disjoint_union(big, big));
  for (const Graph& g : graphs) {
    const auto dense = extreme_eigs_dense(g);
    const auto lanczos = extreme_eigs_lanczos(g);
    EXPECT_NEAR(lanczos.lambda1, dense.lambda1, 1e-7);
    EXPECT_NEAR(lanczos.lambda2, dense.lambda2, 1e-7);
    EXPECT_NEAR(lanczos.lambda_n, dense.lambda_n, 1e-7);
  }
}

TEST(ExtremeEigs, RayleighAndDegreeBounds) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Graph g = generate_ba(800, 3, Seed{s});
    const auto e = extreme_eigs(g);
    const auto d = degrees(g);
    EXPECT_GE(e.lambda1, 2.0 * static_cast<double>(g.edge_count()) / 800.0);
    EXPECT_LE(e.lambda1, static_cast<double>(*std::max_element(d.begin(), d.end())));
    EXPECT_GE(e.lambda1, e.lambda2);
    EXPECT_GE(e.lambda2, e.lambda_n);
  }
}

TEST(PrincipalEigenvector, CompleteGraph) {
  for (std::size_t n : {3, 7, 200}) {
    const auto v = principal_eigenvector(complete_graph(n));
    for (double x : v) EXPECT_NEAR(x, 1.0 / std::sqrt(static_cast<double>(n)), 1e-10);
  }
}

// Star with hub 0: A (sqrt3, 1, 1, 1) = sqrt3 (sqrt3, 1, 1, 1), norm sqrt6.
TEST(PrincipalEigenvector, Star) {
  const auto v = principal_eigenvector(star_graph(3));
  const double s6 = std::sqrt(6.0);
  expect_values(v, {kRoot3 / s6, 1 / s6, 1 / s6, 1 / s6}, 1e-10);
  EXPECT_NEAR(v[0], 0.7071, 1e-4);
  EXPECT_NEAR(v[1], 0.4082, 1e-4);
}

TEST(PrincipalEigenvector, DegenerateCases) {
  try {
    principal_eigenvector(disjoint_union(complete_graph(3), complete_graph(3)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degeneracy);
    EXPECT_NE(std::string(e.what()).find("lambda1 - lambda2"), std::string::npos);
  }
  try {
    principal_eigenvector(Graph::from_edges(5, {}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degeneracy);
  }
}

TEST(PrincipalEigenvector, ContractOnRandomGraphs) {
  std::vector<Graph> graphs{generate_ba(1500, 4, Seed{8}), generate_ba(700, 1, Seed{2})};
  {
    std::vector<double> w(1500);
    const Graph ref = generate_ba(1500, 2, Seed{3});
    for (std::size_t v = 0; v < 1500; ++v) w[v] = static_cast<double>(ref.degree(v));
    graphs.push_back(generate_cl(WeightVector(w), Seed{6}));  // typically disconnected
  }
  for (const Graph& g : graphs) {
    const auto v = principal_eigenvector(g);
    const double lambda1 = extreme_eigs(g).lambda1;
    double norm = 0.0;
    for (double x : v) {
      EXPECT_GE(x, -1e-10);
      norm += x * x;
    }
    EXPECT_NEAR(std::sqrt(norm), 1.0, 1e-10);
    const auto av = adjacency_matvec(g, v);
    double res = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) res += (av[i] - lambda1 * v[i]) * (av[i] - lambda1 * v[i]);
    EXPECT_LE(std::sqrt(res), 1e-8 * std::max(1.0, lambda1));
    // Strictly positive on the component that carries it.
    const auto labels = connected_components(g);
    std::size_t peak = std::max_element(v.begin(), v.end()) - v.begin();
    for (std::size_t i = 0; i < v.size(); ++i)
      if (labels[i] == labels[peak]) {
        EXPECT_GT(v[i], 0.0);
      }
  }
}

TEST(PrincipalEigenvector, MatchesDenseEigenvector) {
  const Graph g = generate_ba(400, 5, Seed{21});
  const auto v = principal_eigenvector(g);
  const auto es = full_eigensystem(g);
  Eigen::VectorXd ref = es.vectors.col(0);
  if (ref.sum() < 0) ref = -ref;
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(v[i], ref[static_cast<Eigen::Index>(i)], 1e-8);
}

}  // namespace
}  // namespace bacl
