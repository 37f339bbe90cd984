#include <gtest/gtest.h>

#include <cmath>

#include "test_util.hpp"

using namespace higcn;
using higcn::testing::random_dense;
using higcn::testing::random_symmetric;

namespace {

SparseMatrix k3_adjacency() {
  return SparseMatrix::from_triplets(3, 3, {{0, 1, 1}, {1, 0, 1}, {0, 2, 1}, {2, 0, 1}, {1, 2, 1}, {2, 1, 1}});
}

SparseMatrix random_sparse(std::size_t rows, std::size_t cols, double density, Rng& rng) {
  std::vector<Triplet> t;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (bernoulli(rng, density)) t.push_back({r, c, uniform(rng, -2.0, 2.0)});
  return SparseMatrix::from_triplets(rows, cols, t);
}

}  // namespace

TEST(Spmv, IdentityReturnsInput) {
  const std::vector<double> x{1, 2, 3};
  EXPECT_EQ(spmv(SparseMatrix::identity(3), x), x);
}

TEST(Spmv, ZeroMatrixAnnihilates) {
  EXPECT_EQ(spmv(SparseMatrix::zero(2, 2), std::vector<double>{5, 7}), (std::vector<double>{0, 0}));
}

TEST(Spmv, TriangleRowSumsAreDegrees) {
  EXPECT_EQ(spmv(k3_adjacency(), std::vector<double>{1, 1, 1}), (std::vector<double>{2, 2, 2}));
}

TEST(Spmv, DimensionMismatchThrows) {
  EXPECT_THROW(spmv(SparseMatrix::identity(3), std::vector<double>{1, 2}), UsageError);
}

TEST(Spmv, UnitVectorsReconstructColumns) {
  Rng rng = make_rng(11);
  for (std::size_t trial = 0; trial < 20; ++trial) {
    const std::size_t rows = 1 + uniform_index(rng, 64);
    const std::size_t cols = 1 + uniform_index(rng, 64);
    const SparseMatrix m = random_sparse(rows, cols, 0.2, rng);
    const DenseMatrix d = m.to_dense();
    for (std::size_t j = 0; j < cols; ++j) {
      std::vector<double> e(cols, 0.0);
      e[j] = 1.0;
      EXPECT_EQ(spmv(m, e), d.column(j));
    }
  }
}

TEST(SpmmDense, IdentityKeepsMatrix) {
  const DenseMatrix x(2, 2, std::vector<double>{1, 2, 3, 4});
  EXPECT_EQ(spmm_dense(SparseMatrix::identity(2), x), x);
}

TEST(SpmmDense, SingleColumnMatchesSpmv) {
  Rng rng = make_rng(3);
  const SparseMatrix m = random_sparse(17, 9, 0.3, rng);
  const DenseMatrix x = random_dense(9, 1, rng);
  const auto y = spmm_dense(m, x);
  EXPECT_EQ(y.column(0), spmv(m, x.column(0)));
}

TEST(SpmmDense, TriangleFirstOrderRowsSumToOne) {
  const auto k = clique_lift(make_graph(3, {{0, 1}, {1, 2}, {0, 2}}), 2);
  const auto op = build_fp_adjacency(k, 1);
  const auto y = spmm_dense(op.a_tilde, DenseMatrix(3, 1, 1.0));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(y(i, 0), 1.0, 1e-15);
}

TEST(SpmmDense, DimensionMismatchThrows) {
  EXPECT_THROW(spmm_dense(SparseMatrix::identity(3), DenseMatrix(2, 2)), UsageError);
}

TEST(SparseMatrix, TripletsSumDuplicatesAndSortColumns) {
  const auto m = SparseMatrix::from_triplets(2, 3, {{0, 2, 1.0}, {0, 0, 2.0}, {0, 2, 0.5}, {1, 1, -1.0}});
  EXPECT_EQ(m.nnz(), 3u);
  EXPECT_EQ(m.at(0, 2), 1.5);
  EXPECT_EQ(m.at(0, 0), 2.0);
  EXPECT_EQ(m.at(1, 1), -1.0);
  EXPECT_EQ(m.at(1, 2), 0.0);
  ASSERT_EQ(m.row_cols(0).size(), 2u);
  EXPECT_LT(m.row_cols(0)[0], m.row_cols(0)[1]);
  EXPECT_EQ(m.row_starts().back(), m.nnz());
}

TEST(SparseMatrix, OutOfRangeTripletThrows) {
  EXPECT_THROW(SparseMatrix::from_triplets(2, 2, {{2, 0, 1.0}}), UsageError);
}

TEST(SparseMatrix, ProductsMatchDenseProducts) {
  Rng rng = make_rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_sparse(12, 7, 0.3, rng);
    const auto b = random_sparse(7, 9, 0.3, rng);
    EXPECT_LE(max_abs_diff(multiply(a, b).to_dense(), matmul(a.to_dense(), b.to_dense())), 1e-12);
    EXPECT_EQ(transpose(a).to_dense(), transpose(a.to_dense()));
    const auto c = random_sparse(12, 7, 0.3, rng);
    DenseMatrix expected = a.to_dense();
    for (double& v : expected.values()) v *= 2.0;
    axpy(-3.0, c.to_dense(), expected);
    EXPECT_LE(max_abs_diff(add(a, c, 2.0, -3.0).to_dense(), expected), 1e-12);
  }
}

TEST(SparseMatrix, ScaleRowsCols) {
  const auto m = k3_adjacency();
  const std::vector<double> left{1, 2, 3};
  const std::vector<double> right{4, 5, 6};
  const auto s = scale_rows_cols(m, left, right);
  EXPECT_EQ(s.at(0, 1), 1.0 * 5.0);
  EXPECT_EQ(s.at(2, 0), 3.0 * 4.0);
  EXPECT_EQ(max_asymmetry(m), 0.0);
  EXPECT_GT(max_asymmetry(s), 0.0);
}

TEST(DenseMatrix, ShapeMismatchThrows) {
  EXPECT_THROW(DenseMatrix(2, 2, std::vector<double>{1, 2, 3}), UsageError);
  EXPECT_THROW(matmul(DenseMatrix(2, 3), DenseMatrix(2, 3)), UsageError);
}

TEST(DenseMatrix, TransposedProductsAgree) {
  Rng rng = make_rng(8);
  const auto a = random_dense(5, 3, rng);
  const auto b = random_dense(5, 4, rng);
  const auto c = random_dense(6, 3, rng);
  EXPECT_LE(max_abs_diff(matmul_tn(a, b), matmul(transpose(a), b)), 1e-15);
  EXPECT_LE(max_abs_diff(matmul_nt(a, c), matmul(a, transpose(c))), 1e-15);
}

TEST(SymEig, DiagonalMatrix) {
  DenseMatrix a(3, 3);
  a(0, 0) = 3;
  a(1, 1) = 1;
  a(2, 2) = 2;
  const auto e = dense_sym_eig(a);
  EXPECT_EQ(e.eigenvalues, (std::vector<double>{1, 2, 3}));
}

TEST(SymEig, TwoByTwoSwap) {
  const auto e = dense_sym_eig(DenseMatrix(2, 2, std::vector<double>{0, 1, 1, 0}));
  EXPECT_NEAR(e.eigenvalues[0], -1.0, 1e-14);
  EXPECT_NEAR(e.eigenvalues[1], 1.0, 1e-14);
}

TEST(SymEig, SecondOrderLaplacianOfTriangle) {
  const auto k = clique_lift(make_graph(3, {{0, 1}, {1, 2}, {0, 2}}), 2);
  const auto l = build_fp_laplacian(build_fp_adjacency(k, 2));
  const auto e = dense_sym_eig(l.to_dense());
  EXPECT_NEAR(e.eigenvalues[0], 0.0, 1e-14);
  EXPECT_NEAR(e.eigenvalues[1], 1.0, 1e-14);
  EXPECT_NEAR(e.eigenvalues[2], 1.0, 1e-14);
}

TEST(SymEig, RejectsAsymmetricAndOversized) {
  EXPECT_THROW(dense_sym_eig(DenseMatrix(2, 2, std::vector<double>{0, 1, 0.5, 0})), NumericalError);
  EXPECT_THROW(dense_sym_eig(DenseMatrix(2, 3)), NumericalError);
  EXPECT_THROW(dense_sym_eig(DenseMatrix(kMaxEigenSize + 1, kMaxEigenSize + 1)), NumericalError);
}

TEST(SymEig, ReconstructsRandomSymmetricMatrices) {
  Rng rng = make_rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 64);
    const auto a = random_symmetric(n, rng);
    const auto e = dense_sym_eig(a);
    ASSERT_TRUE(std::is_sorted(e.eigenvalues.begin(), e.eigenvalues.end()));
    const DenseMatrix& phi = e.eigenvectors;
    DenseMatrix lam(n, n);
    for (std::size_t i = 0; i < n; ++i) lam(i, i) = e.eigenvalues[i];
    const auto rebuilt = matmul(matmul(phi, lam), transpose(phi));
    EXPECT_LE(max_abs_diff(rebuilt, a), 1e-9);
    EXPECT_LE(max_abs_diff(matmul(a, phi), matmul(phi, lam)), 1e-9 * std::max(1.0, max_abs(a)));
    EXPECT_LE(max_abs_diff(matmul_tn(phi, phi), DenseMatrix::identity(n)), 1e-9);
  }
}

TEST(SymEig, PsdMatricesHaveNonNegativeSpectrum) {
  Rng rng = make_rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 30);
    const auto b = random_dense(n, n / 2 + 1, rng);
    const auto e = dense_sym_eig(matmul_nt(b, b));
    EXPECT_GE(e.eigenvalues.front(), -1e-10);
  }
}
