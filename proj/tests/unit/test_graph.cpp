#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "expect_error.hpp"
#include "oracles.hpp"
#include "qsync/graph.hpp"

namespace {

using namespace qsync;

DirectedGraph parse(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

void expect_spectrum_identities(const DirectedGraph& g, double tol) {
  const Laplacian L = build_laplacian(g);
  const auto s = spectral_decomposition(L);
  const std::size_t n = g.size();
  const CMat Lc = L.matrix().cast<Complex>();
  const CVec ones = CVec::Ones(static_cast<Eigen::Index>(n));
  const CVec xi = s.xi.cast<Complex>();

  EXPECT_NEAR((s.xi.transpose() * L.matrix()).cwiseAbs().maxCoeff(), 0.0, tol);
  EXPECT_NEAR(s.xi.sum(), 1.0, tol);
  EXPECT_GT(s.xi.minCoeff(), 0.0);

  const auto m = static_cast<Eigen::Index>(n - 1);
  EXPECT_LT((s.dual_basis * s.basis - CMat::Identity(m, m)).cwiseAbs().maxCoeff(), tol);
  EXPECT_LT((s.dual_basis * ones).cwiseAbs().maxCoeff(), tol);
  EXPECT_LT((xi.transpose() * s.basis).cwiseAbs().maxCoeff(), tol);
  const CMat resolution = ones * xi.transpose() + s.basis * s.dual_basis;
  EXPECT_LT((resolution - CMat::Identity(m + 1, m + 1)).cwiseAbs().maxCoeff(), tol);

  const CMat T = s.dual_basis * Lc * s.basis;
  EXPECT_LT((T - s.triangular).cwiseAbs().maxCoeff(), tol * std::max(1.0, inf_norm(Lc)));
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) EXPECT_LT(std::abs(s.triangular(i, j)), tol);
    EXPECT_LT(std::abs(s.triangular(i, i) - s.lambdas[static_cast<std::size_t>(i)]), tol);
  }
  EXPECT_TRUE(std::is_sorted(s.lambdas.begin(), s.lambdas.end(), spectral_order));

  auto dense = oracle::dense_eigenvalues(Lc);
  const auto zero = std::min_element(dense.begin(), dense.end(),
                                     [](Complex a, Complex b) { return std::abs(a) < std::abs(b); });
  dense.erase(zero);
  EXPECT_LT(oracle::multiset_distance(dense, s.lambdas), 1e-8 * std::max(1.0, inf_norm(Lc)));
}

TEST(Graph, LaplacianMatchesEntrywiseOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = oracle::random_strong_digraph(2 + trial % 9, 0.3, rng);
    const Mat L = build_laplacian(g).matrix();
    EXPECT_LT((L - oracle::laplacian_of(g.adjacency())).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT(L.rowwise().sum().cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Graph, RejectsMalformedEdgeSets) {
  EXPECT_QSYNC_ERROR(DirectedGraph(1, {}), ErrorCode::InvalidGraph);
  EXPECT_QSYNC_ERROR(DirectedGraph(3, {{0, 0, 1.0}}), ErrorCode::InvalidGraph);
  EXPECT_QSYNC_ERROR(DirectedGraph(3, {{0, 3, 1.0}}), ErrorCode::InvalidGraph);
  EXPECT_QSYNC_ERROR(DirectedGraph(3, {{0, 1, 1.0}, {0, 1, 2.0}}), ErrorCode::InvalidGraph);
  EXPECT_QSYNC_ERROR(DirectedGraph(3, {{0, 1, 0.0}}), ErrorCode::InvalidGraph);
  EXPECT_QSYNC_ERROR(DirectedGraph(3, {{0, 1, -1.0}}), ErrorCode::InvalidGraph);
  EXPECT_QSYNC_ERROR(DirectedGraph(3, {{0, 1, std::nan("")}}), ErrorCode::InvalidGraph);
}

TEST(Graph, LaplacianFromMatrixValidates) {
  Mat good(2, 2);
  good << 1, -1, -2, 2;
  EXPECT_NO_THROW(Laplacian::from_matrix(good));
  Mat rows(2, 2);
  rows << 1, -0.5, -2, 2;
  EXPECT_QSYNC_ERROR(Laplacian::from_matrix(rows), ErrorCode::InvalidArgument);
  Mat sign(2, 2);
  sign << -1, 1, -2, 2;
  EXPECT_QSYNC_ERROR(Laplacian::from_matrix(sign), ErrorCode::InvalidArgument);
}

TEST(Graph, StrongConnectivityAgreesWithWarshall) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int strong = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + trial % 7;
    const double density = 0.1 + 0.4 * u(rng);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && u(rng) < density) edges.push_back({i, j, 0.5 + u(rng)});
      }
    }
    const DirectedGraph g(n, edges);
    const bool expected = oracle::strongly_connected(g.adjacency());
    strong += expected;
    EXPECT_EQ(is_strongly_connected(g), expected) << "trial " << trial;
  }
  EXPECT_GT(strong, 20);
  EXPECT_LT(strong, 280);
}

TEST(Graph, SpectrumIdentitiesOnRandomDigraphs) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    expect_spectrum_identities(oracle::random_strong_digraph(2 + trial % 11, 0.25, rng), 1e-9);
  }
}

TEST(Graph, SpectrumIdentitiesOnStandardGraphs) {
  expect_spectrum_identities(oracle::undirected_path(3), 1e-12);
  expect_spectrum_identities(oracle::undirected_cycle(4), 1e-12);
  expect_spectrum_identities(oracle::undirected_complete(4), 1e-12);
  expect_spectrum_identities(standin_graph(), 1e-10);
}

TEST(Graph, UndirectedPathSpectrum) {
  const auto s = spectral_decomposition(build_laplacian(oracle::undirected_path(3)));
  ASSERT_EQ(s.lambdas.size(), 2u);
  EXPECT_NEAR(s.lambdas[0].real(), 1.0, 1e-12);
  EXPECT_NEAR(s.lambdas[1].real(), 3.0, 1e-12);
  EXPECT_EQ(s.lambdas[0].imag(), 0.0);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(s.xi(i), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(s.xi_max(), 1.0 / 3.0, 1e-12);
}

TEST(Graph, TwoNodeDirectedXi) {
  // a_12 = 1, a_21 = 3: ξ weights the node that is heard more weakly.
  const auto s = spectral_decomposition(build_laplacian(DirectedGraph(2, {{0, 1, 1.0}, {1, 0, 3.0}})));
  EXPECT_NEAR(s.xi(0), 0.75, 1e-14);
  EXPECT_NEAR(s.xi(1), 0.25, 1e-14);
  EXPECT_NEAR(s.lambdas[0].real(), 4.0, 1e-13);
}

TEST(Graph, RejectsNonStrongLaplacian) {
  const DirectedGraph chain(3, {{1, 0, 1.0}, {2, 1, 1.0}});
  EXPECT_FALSE(is_strongly_connected(chain));
  EXPECT_QSYNC_ERROR(spectral_decomposition(build_laplacian(chain)),
                     ErrorCode::NotStronglyConnected);
  const DirectedGraph split(4, {{0, 1, 1.0}, {1, 0, 1.0}, {2, 3, 1.0}, {3, 2, 1.0}});
  EXPECT_QSYNC_ERROR(spectral_decomposition(build_laplacian(split)),
                     ErrorCode::NotStronglyConnected);
}

TEST(Graph, ParsesEdgeLists) {
  const auto g = parse("# triangle\n\nn 3\n1 2 0.5\n2 3 1 # inline\n  3 1 2\n");
  EXPECT_EQ(g.size(), 3u);
  ASSERT_EQ(g.edges().size(), 3u);
  EXPECT_EQ(g.edges()[0], (Edge{0, 1, 0.5}));
  EXPECT_EQ(g.edges()[2], (Edge{2, 0, 2.0}));
  EXPECT_EQ(parse("1 2 1\n2 1 1\n").size(), 2u);
  EXPECT_EQ(parse("n 5\n1 2 1\n2 1 1\n").size(), 5u);
}

TEST(Graph, ParseErrorsCarryLineNumbers) {
  auto message = [](const std::string& text) {
    try {
      parse(text);
    } catch (const Error& e) {
      return std::string(to_string(e.code())) + " " + e.what();
    }
    return std::string("no error");
  };
  EXPECT_NE(message("1 2 1\n2 x 1\n").find("line 2"), std::string::npos);
  EXPECT_NE(message("# c\n1 2 1 extra\n").find("line 2"), std::string::npos);
  EXPECT_NE(message("0 1 1\n").find("line 1"), std::string::npos);
  EXPECT_NE(message("n 1\n").find("line 1"), std::string::npos);
  EXPECT_QSYNC_ERROR(parse("n 2\n1 3 1\n"), ErrorCode::Parse);
  EXPECT_QSYNC_ERROR(parse("1 1 1\n"), ErrorCode::InvalidGraph);
  EXPECT_QSYNC_ERROR(read_graph_file("/nonexistent/graph"), ErrorCode::Io);
}

TEST(Graph, WriteParseRoundTrip) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = oracle::random_strong_digraph(2 + trial % 8, 0.4, rng);
    std::ostringstream out;
    write_graph(out, g);
    const auto back = parse(out.str());
    EXPECT_EQ(back.size(), g.size());
    EXPECT_EQ(back.edges(), g.edges());
  }
}

TEST(Graph, StandinMatchesShippedFile) {
  const auto builtin = standin_graph();
  const auto file = read_graph_file(QSYNC_SOURCE_DIR "/data/standin10.graph");
  EXPECT_EQ(builtin.size(), 10u);
  EXPECT_EQ(builtin.edges().size(), 80u);
  EXPECT_EQ(file.size(), builtin.size());
  EXPECT_EQ(file.adjacency(), builtin.adjacency());
  EXPECT_TRUE(is_strongly_connected(builtin));
}

}  // namespace
