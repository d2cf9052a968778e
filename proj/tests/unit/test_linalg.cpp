#include <random>

#include <Eigen/Cholesky>
#include <gtest/gtest.h>

#include "fpno/errors.hpp"
#include "fpno/linalg/csr_matrix.hpp"
#include "fpno/linalg/lu.hpp"
#include "fpno/linalg/vector_ops.hpp"

namespace fpno {
namespace {

CsrMatrix laplacian_1d(int n) {
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) {
    t.push_back({i, i, 2.0});
    if (i > 0) t.push_back({i, i - 1, -1.0});
    if (i + 1 < n) t.push_back({i, i + 1, -1.0});
  }
  return csr_from_triplets(t, n, n);
}

TEST(VectorOps, NormOfThreeFour) {
  Vec x(2);
  x << 3.0, 4.0;
  EXPECT_EQ(norm2(x), 5.0);
  EXPECT_EQ(max_abs(x), 4.0);
}

TEST(VectorOps, DotOfOrthogonal) {
  Vec a(3), b(3);
  a << 1, 0, 2;
  b << 0, 5, 0;
  EXPECT_EQ(dot(a, b), 0.0);
}

TEST(VectorOps, AxpyMatchesLoop) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  Vec x(50), y(50);
  for (int i = 0; i < 50; ++i) {
    x[i] = nd(rng);
    y[i] = nd(rng);
  }
  Vec expect = y;
  for (int i = 0; i < 50; ++i) expect[i] += -0.75 * x[i];
  axpy(-0.75, x, y);
  for (int i = 0; i < 50; ++i) EXPECT_DOUBLE_EQ(y[i], expect[i]);
}

TEST(VectorOps, SizeMismatchThrows) {
  Vec a = Vec::Zero(3), b = Vec::Zero(4);
  EXPECT_THROW(dot(a, b), DimensionError);
  EXPECT_THROW(axpy(1.0, a, b), DimensionError);
}

TEST(VectorOps, NormIsZeroForEmpty) { EXPECT_EQ(norm2(Vec()), 0.0); }

TEST(Csr, DuplicateTripletsAreSummed) {
  const CsrMatrix a = csr_from_triplets({{0, 1, 1.5}, {0, 1, 2.5}, {1, 0, -1.0}}, 2, 2);
  EXPECT_EQ(a.nnz(), 2);
  EXPECT_EQ(a.at(0, 1), 4.0);
  EXPECT_EQ(a.at(1, 0), -1.0);
  EXPECT_EQ(a.at(0, 0), 0.0);
}

TEST(Csr, ColumnsSortedWithinRows) {
  const CsrMatrix a = csr_from_triplets({{0, 3, 1.0}, {0, 0, 2.0}, {0, 2, 3.0}}, 1, 4);
  const auto& c = a.col_idx();
  EXPECT_TRUE(std::is_sorted(c.begin(), c.end()));
}

TEST(Csr, EmptyMatrix) {
  const CsrMatrix a = csr_from_triplets({}, 3, 3);
  EXPECT_EQ(a.nnz(), 0);
  EXPECT_EQ(a.row_ptr().size(), 4u);
  EXPECT_EQ(a.multiply(Vec::Ones(3)), Vec::Zero(3));
}

TEST(Csr, OutOfRangeTripletThrows) {
  EXPECT_THROW(csr_from_triplets({{2, 0, 1.0}}, 2, 2), IndexError);
  EXPECT_THROW(csr_from_triplets({{0, -1, 1.0}}, 2, 2), IndexError);
}

TEST(Csr, DenseRoundTrip) {
  Eigen::MatrixXd d(3, 4);
  d << 1, 0, 0, 2, 0, 0, 3, 0, -4, 5, 0, 6;
  const CsrMatrix a = CsrMatrix::from_dense(d);
  EXPECT_EQ(a.nnz(), 6);
  EXPECT_EQ(a.to_dense(), d);
}

TEST(Csr, MultiplyAndTransposeMatchDense) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(7, 5);
  for (int k = 0; k < 15; ++k) d(rng() % 7, rng() % 5) = u(rng);
  const CsrMatrix a = CsrMatrix::from_dense(d);
  Vec x(5), y(7);
  for (int i = 0; i < 5; ++i) x[i] = u(rng);
  for (int i = 0; i < 7; ++i) y[i] = u(rng);
  EXPECT_LT((a.multiply(x) - d * x).norm(), 1e-14);
  EXPECT_LT((a.multiply_transpose(y) - d.transpose() * y).norm(), 1e-14);
  EXPECT_EQ(a.transpose().to_dense(), d.transpose());
}

TEST(Csr, MultiplyDimensionMismatch) {
  EXPECT_THROW(CsrMatrix::identity(3).multiply(Vec::Ones(4)), DimensionError);
}

TEST(Lu, IdentitySolveReturnsRhs) {
  Vec b(4);
  b << 1, -2, 3, 0.5;
  const LuFactors f = lu_factorize(CsrMatrix::identity(4));
  EXPECT_EQ(solve(f, b), b);
}

TEST(Lu, DiagonalTwoHalvesRhs) {
  std::vector<Triplet> t;
  for (int i = 0; i < 5; ++i) t.push_back({i, i, 2.0});
  const LuFactors f = lu_factorize(csr_from_triplets(t, 5, 5));
  Vec b = Vec::LinSpaced(5, 1.0, 5.0);
  EXPECT_LT((solve(f, b) - 0.5 * b).norm(), 1e-15);
}

TEST(Lu, ZeroRhsGivesZero) {
  const LuFactors f = lu_factorize(laplacian_1d(6));
  EXPECT_EQ(solve(f, Vec::Zero(6)), Vec::Zero(6));
}

TEST(Lu, Laplacian1dMatchesClosedFormInverse) {
  const int n = 10;
  const LuFactors f = lu_factorize(laplacian_1d(n));
  for (int j = 0; j < n; ++j) {
    Vec e = Vec::Zero(n);
    e[j] = 1.0;
    const Vec col = solve(f, e);
    for (int i = 0; i < n; ++i) {
      // (T^{-1})_{ij} = min(i,j) (n + 1 - max(i,j)) / (n + 1), 1-based
      const double expect = std::min(i + 1, j + 1) * (n + 1.0 - std::max(i + 1, j + 1)) / (n + 1.0);
      EXPECT_NEAR(col[i], expect, 1e-12);
    }
  }
}

TEST(Lu, RandomSpdMatchesDenseCholesky) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd m(20, 20);
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) m(i, j) = nd(rng);
  const Eigen::MatrixXd spd = m * m.transpose() + 20.0 * Eigen::MatrixXd::Identity(20, 20);
  Vec b(20);
  for (int i = 0; i < 20; ++i) b[i] = nd(rng);
  const Vec expect = spd.llt().solve(b);
  const Vec x = solve(lu_factorize(CsrMatrix::from_dense(spd)), b);
  EXPECT_LT((x - expect).norm() / expect.norm(), 1e-12);
}

TEST(Lu, ZeroRowIsSingular) {
  Eigen::MatrixXd d(3, 3);
  d << 1, 2, 0, 0, 0, 0, 3, 1, 4;
  EXPECT_THROW(lu_factorize(CsrMatrix::from_dense(d)), SingularMatrix);
}

TEST(Lu, NonSquareRejected) {
  EXPECT_THROW(lu_factorize(CsrMatrix::from_dense(Eigen::MatrixXd::Ones(2, 3))), DimensionError);
}

TEST(Lu, RhsSizeMismatch) {
  const LuFactors f = lu_factorize(CsrMatrix::identity(3));
  EXPECT_THROW(f.solve(Vec::Ones(2)), DimensionError);
}

TEST(Lu, NonsymmetricResidualIsSmall) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  const int n = 40;
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) {
    t.push_back({i, i, 4.0 + u(rng)});
    for (int k = 0; k < 3; ++k) t.push_back({i, static_cast<std::int64_t>(rng() % n), u(rng)});
  }
  const CsrMatrix a = csr_from_triplets(t, n, n);
  Vec b(n);
  for (int i = 0; i < n; ++i) b[i] = u(rng);
  const Vec x = solve(lu_factorize(a), b);
  EXPECT_LT((a.multiply(x) - b).norm(), 1e-12 * b.norm());
}

}  // namespace
}  // namespace fpno
