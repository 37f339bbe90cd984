#include <gtest/gtest.h>

#include <cmath>

#include "test_util.hpp"

using namespace higcn;

namespace {

SimplicialComplex triangle_complex() { return clique_lift(synthetic::complete(3), 2); }

// Graph without isolated nodes: ER plus a spanning path.
Graph connected_er(std::size_t n, double p, Rng& rng) {
  Graph g = synthetic::erdos_renyi(n, p, rng);
  std::vector<Edge> edges = g.edges;
  for (NodeId v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return make_graph(n, edges);
}

}  // namespace

TEST(FpAdjacency, TriangleFirstOrder) {
  const auto op = build_fp_adjacency(triangle_complex(), 1);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(op.a_tilde.at(i, j), i == j ? 0.5 : 0.25, 1e-15);
}

TEST(FpAdjacency, TriangleSecondOrderIsAveraging) {
  const auto op = build_fp_adjacency(triangle_complex(), 2);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(op.a_tilde.at(i, j), 1.0 / 3.0, 1e-15);
  const auto e = dense_sym_eig(op.a_tilde.to_dense()).eigenvalues;
  EXPECT_NEAR(e[0], 0.0, 1e-14);
  EXPECT_NEAR(e[1], 0.0, 1e-14);
  EXPECT_NEAR(e[2], 1.0, 1e-14);
}

TEST(FpAdjacency, TriangleFreeSecondOrderIsZero) {
  const auto op = build_fp_adjacency(clique_lift(synthetic::cycle(6), 2), 2);
  EXPECT_EQ(op.a_tilde.nnz(), 0u);
  for (bool iso : op.isolated) EXPECT_TRUE(iso);
}

TEST(FpAdjacency, IsolatedNodesHaveZeroRowsAndColumns) {
  // Triangle 0-1-2 plus pendant edge 2-3: node 3 is in no triangle.
  const auto k = clique_lift(make_graph(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}}), 2);
  const auto op = build_fp_adjacency(k, 2);
  EXPECT_TRUE(op.isolated[3]);
  EXPECT_FALSE(op.isolated[2]);
  for (std::size_t j = 0; j < 4; ++j) {
    EXPECT_EQ(op.a_tilde.at(3, j), 0.0);
    EXPECT_EQ(op.a_tilde.at(j, 3), 0.0);
  }
  const auto l = build_fp_laplacian(op);
  EXPECT_EQ(l.at(3, 3), 1.0);
}

TEST(FpLaplacian, TriangleSecondOrderKillsConstants) {
  const auto l = build_fp_laplacian(build_fp_adjacency(triangle_complex(), 2));
  for (double v : spmv(l, std::vector<double>{1, 1, 1})) EXPECT_NEAR(v, 0.0, 1e-15);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(l.at(i, j), (i == j ? 1.0 : 0.0) - 1.0 / 3.0, 1e-15);
}

TEST(FpLaplacian, ZeroOperatorGivesIdentity) {
  const auto l = build_fp_laplacian(build_fp_adjacency(clique_lift(synthetic::cycle(5), 2), 2));
  EXPECT_EQ(l.to_dense(), DenseMatrix::identity(5));
}

TEST(FpLaplacian, TriangleFirstOrderSpectrum) {
  const auto l = build_fp_laplacian(build_fp_adjacency(triangle_complex(), 1));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(l.at(i, j), i == j ? 0.5 : -0.25, 1e-15);
  const auto e = dense_sym_eig(l.to_dense()).eigenvalues;
  EXPECT_NEAR(e[0], 0.0, 1e-14);
  EXPECT_NEAR(e[1], 0.75, 1e-14);
  EXPECT_NEAR(e[2], 0.75, 1e-14);
}

TEST(FpOperators, SymmetricPsdWithUnitBoundOnRandomGraphs) {
  Rng rng = make_rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 63);
    const auto k = clique_lift(synthetic::erdos_renyi(n, 0.3, rng), 3);
    for (std::size_t p = 1; p <= 3; ++p) {
      const auto s = petal_spectrum(k, p);
      EXPECT_LE(s.max_asymmetry, 1e-12);
      EXPECT_GE(s.adjacency_min, -1e-10);
      EXPECT_LE(s.adjacency_max, 1.0 + 1e-10);
      EXPECT_GE(s.laplacian_min, -1e-10);
      EXPECT_LE(s.laplacian_max, 1.0 + 1e-10);
      EXPECT_TRUE(s.psd);
    }
  }
}

TEST(FpOperators, FirstOrderMatchesNormalizedAdjacencyIdentity) {
  Rng rng = make_rng(103);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = connected_er(3 + uniform_index(rng, 60), 0.3, rng);
    EXPECT_LE(reduced_adjacency_residual(g), 1e-12);
  }
  EXPECT_THROW(reduced_adjacency_residual(make_graph(3, {{0, 1}})), NumericalError);
}

// The kernel of L_p is spanned by D_p^{1/2} 1; for a petal with constant degree this is
// the constant vector.
TEST(FpLaplacian, KernelIsSquareRootDegreeVector) {
  Rng rng = make_rng(107);
  for (int trial = 0; trial < 30; ++trial) {
    const auto k = clique_lift(connected_er(3 + uniform_index(rng, 40), 0.4, rng), 3);
    for (std::size_t p = 1; p <= 3; ++p) {
      const auto op = build_fp_adjacency(k, p);
      const auto l = build_fp_laplacian(op);
      std::vector<double> v(op.num_nodes());
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sqrt(op.node_degrees[i]);
      for (double r : spmv(l, v)) EXPECT_LE(std::abs(r), 1e-12);
    }
  }
}

TEST(FpLaplacian, ConstantVectorInKernelForConstantPetalDegree) {
  for (const auto& g : {synthetic::complete(5), synthetic::cycle(7), synthetic::disjoint_triangles(3)}) {
    const auto k = clique_lift(g, 2);
    for (std::size_t p = 1; p <= 2; ++p) {
      if (k.count(p) == 0) continue;
      const auto l = build_fp_laplacian(build_fp_adjacency(k, p));
      for (double r : spmv(l, std::vector<double>(g.n, 1.0))) EXPECT_LE(std::abs(r), 1e-12);
    }
  }
}

TEST(Walk, TriangleSecondOrderSpreadsEvenly) {
  const auto inc = incidence_matrix(triangle_complex(), 2);
  const auto out = two_step_walk(inc, {2, {1, 0, 0}}, 2);
  for (double v : out.pi) EXPECT_NEAR(v, 1.0 / 3.0, 1e-15);
}

TEST(Walk, TriangleFirstOrderTwoSubSteps) {
  const auto inc = incidence_matrix(triangle_complex(), 1);
  const auto out = two_step_walk(inc, {1, {1, 0, 0}}, 2);
  EXPECT_NEAR(out.pi[0], 0.5, 1e-15);
  EXPECT_NEAR(out.pi[1], 0.25, 1e-15);
  EXPECT_NEAR(out.pi[2], 0.25, 1e-15);
}

TEST(Walk, RejectsOddStepsAndIsolatedMass) {
  const auto inc2 = incidence_matrix(clique_lift(make_graph(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}}), 2), 2);
  EXPECT_THROW(two_step_walk(inc2, {2, {1, 0, 0, 0}}, 3), UsageError);
  EXPECT_THROW(two_step_walk(inc2, {2, {1, 0, 0, 0}}, 0), UsageError);
  EXPECT_THROW(two_step_walk(inc2, {2, {0, 0, 0, 1}}, 2), NumericalError);
}

TEST(Walk, StepwiseMatchesMatrixFormAndConservesMass) {
  Rng rng = make_rng(109);
  for (int trial = 0; trial < 20; ++trial) {
    const auto k = clique_lift(connected_er(3 + uniform_index(rng, 30), 0.4, rng), 2);
    const std::size_t p = 1 + uniform_index(rng, 2);
    if (k.count(p) == 0) continue;
    const auto inc = incidence_matrix(k, p);
    const auto deg = inc.node_degrees();
    std::vector<double> pi(k.num_nodes(), 0.0);
    double total = 0.0;
    for (std::size_t v = 0; v < pi.size(); ++v)
      if (deg[v] > 0) total += pi[v] = uniform01(rng);
    for (double& v : pi) v /= total;
    const std::size_t steps = 2 * (1 + uniform_index(rng, 5));
    const auto walked = two_step_walk(inc, {p, pi}, steps);
    const auto w = walk_operator(inc);
    std::vector<double> matrix_pi = pi;
    for (std::size_t s = 0; s < steps / 2; ++s) matrix_pi = spmv(w, matrix_pi);
    EXPECT_LE(max_abs_diff(walked.pi, matrix_pi), 1e-12);
    double mass = 0.0;
    for (double v : walked.pi) mass += v;
    EXPECT_NEAR(mass, 1.0, 1e-12);
  }
}

// A_p = D^{-1/2} W_p D^{1/2}: similar matrices, identical spectra.
TEST(Walk, WalkOperatorIsSimilarToFpAdjacency) {
  Rng rng = make_rng(113);
  for (int trial = 0; trial < 15; ++trial) {
    const auto k = clique_lift(connected_er(3 + uniform_index(rng, 30), 0.4, rng), 1);
    const auto inc = incidence_matrix(k, 1);
    const auto op = build_fp_adjacency(inc);
    const auto w = walk_operator(inc);
    std::vector<double> left(k.num_nodes());
    std::vector<double> right(k.num_nodes());
    for (std::size_t v = 0; v < left.size(); ++v) {
      left[v] = 1.0 / std::sqrt(op.node_degrees[v]);
      right[v] = std::sqrt(op.node_degrees[v]);
    }
    EXPECT_LE(max_abs_diff(scale_rows_cols(w, left, right).to_dense(), op.a_tilde.to_dense()), 1e-12);
    // Similar matrices share their spectrum; W itself is not symmetric, so compare the
    // characteristic data through the symmetric representative and the trace.
    double trace_w = 0.0;
    double trace_a = 0.0;
    for (std::size_t v = 0; v < left.size(); ++v) {
      trace_w += w.at(v, v);
      trace_a += op.a_tilde.at(v, v);
    }
    EXPECT_NEAR(trace_w, trace_a, 1e-9);
    const auto wd = w.to_dense();
    for (std::size_t c = 0; c < wd.cols(); ++c) {
      double col = 0.0;
      for (std::size_t r = 0; r < wd.rows(); ++r) col += wd(r, c);
      EXPECT_NEAR(col, 1.0, 1e-12);
    }
  }
}

TEST(Propagate, ZerothPowerIsInputAndRecurrenceHolds) {
  Rng rng = make_rng(127);
  const auto k = clique_lift(synthetic::erdos_renyi(20, 0.3, rng), 2);
  const auto ops = build_fp_operators(k, 3);
  const auto x = higcn::testing::random_dense(20, 3, rng);
  const auto pf = propagate_features(ops, x, 4);
  ASSERT_EQ(pf.max_order, 3u);
  for (std::size_t p = 0; p < 3; ++p) {
    EXPECT_EQ(pf.block(p, 0), x);
    for (std::size_t kk = 1; kk <= 4; ++kk) EXPECT_EQ(pf.block(p, kk), spmm_dense(ops[p].a_tilde, pf.block(p, kk - 1)));
  }
  // Order 3 exceeds the lifted complex: zero operator, zero blocks beyond k = 0.
  EXPECT_EQ(max_abs(pf.block(2, 1)), 0.0);
}

TEST(Propagate, TriangleFirstOrderOneHop) {
  const auto ops = build_fp_operators(triangle_complex(), 1);
  DenseMatrix x(3, 1);
  x(0, 0) = 1.0;
  const auto pf = propagate_features(ops, x, 1);
  EXPECT_NEAR(pf.block(0, 1)(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(pf.block(0, 1)(1, 0), 0.25, 1e-15);
  EXPECT_NEAR(pf.block(0, 1)(2, 0), 0.25, 1e-15);
}

TEST(Propagate, DimensionMismatchThrows) {
  const auto ops = build_fp_operators(triangle_complex(), 2);
  EXPECT_THROW(propagate_features(ops, DenseMatrix(4, 1), 2), UsageError);
}

TEST(FilterOracle, IdentityFilterReturnsInput) {
  const auto l = build_fp_laplacian(build_fp_adjacency(triangle_complex(), 1));
  const std::vector<double> x{0.3, -1.0, 2.0};
  const std::vector<double> coeffs{1.0, 0.0, 0.0};
  EXPECT_LE(max_abs_diff(spectral_filter_oracle(l, coeffs, x), x), 1e-12);
}

TEST(FilterOracle, LinearFilterOnConstantVanishes) {
  const auto l = build_fp_laplacian(build_fp_adjacency(triangle_complex(), 2));
  const std::vector<double> coeffs{0.0, 1.0};
  for (double v : spectral_filter_oracle(l, coeffs, std::vector<double>{1, 1, 1})) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(FilterOracle, MatchesPolynomialApplication) {
  Rng rng = make_rng(131);
  {
    const auto l = build_fp_laplacian(build_fp_adjacency(triangle_complex(), 1));
    std::vector<double> coeffs(5);
    for (double& c : coeffs) c = uniform(rng, -1, 1);
    const std::vector<double> x{1.0, -2.0, 0.5};
    // Brute force: sum_k c_k L^k x with explicit dense powers.
    const auto ld = l.to_dense();
    DenseMatrix power = DenseMatrix::identity(3);
    std::vector<double> expected(3, 0.0);
    for (double c : coeffs) {
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) expected[i] += c * power(i, j) * x[j];
      power = matmul(power, ld);
    }
    EXPECT_LE(max_abs_diff(apply_polynomial(l, coeffs, x), expected), 1e-12);
    EXPECT_LE(max_abs_diff(spectral_filter_oracle(l, coeffs, x), expected), 1e-12);
  }
  for (int trial = 0; trial < 20; ++trial) {
    const auto k = clique_lift(synthetic::erdos_renyi(2 + uniform_index(rng, 50), 0.3, rng), 2);
    const auto l = build_fp_laplacian(build_fp_adjacency(k, 1 + uniform_index(rng, 2)));
    std::vector<double> coeffs(1 + uniform_index(rng, 11));
    for (double& c : coeffs) c = uniform(rng, -1, 1);
    std::vector<double> x(k.num_nodes());
    for (double& v : x) v = uniform(rng, -1, 1);
    EXPECT_LE(max_abs_diff(spectral_filter_oracle(l, coeffs, x), apply_polynomial(l, coeffs, x)), 1e-8);
  }
}

TEST(FilterOracle, RejectsAsymmetricOperator) {
  const auto l = SparseMatrix::from_triplets(2, 2, {{0, 1, 1.0}});
  EXPECT_THROW(spectral_filter_oracle(l, std::vector<double>{1.0}, std::vector<double>{1, 1}), NumericalError);
}
