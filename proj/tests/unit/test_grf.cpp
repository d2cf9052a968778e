#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "fpno/errors.hpp"
#include "fpno/grf/grf.hpp"
#include "fpno/mesh/mesh.hpp"

namespace fpno {
namespace {

const std::vector<Point2> kCluster = {{0.5, 0.5}, {0.55, 0.5}, {0.5, 0.55}, {0.45, 0.48}, {0.53, 0.56}};

TEST(Covariance, DiagonalIsVariancePlusJitter) {
  const GrfSpec spec{0.0, 0.1, 0.1, 1e-10};
  const auto c = covariance_matrix(kCluster, spec);
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    EXPECT_EQ(c(i, i), spec.sigma * spec.sigma + spec.jitter);
    EXPECT_NEAR(c(i, i), 0.01 + 1e-10, 1e-17);
  }
}

TEST(Covariance, OffDiagonalAtOneLengthScale) {
  const auto c = covariance_matrix({{0.2, 0.3}, {0.3, 0.3}}, GrfSpec{0.0, 0.1, 0.1, 1e-10});
  EXPECT_NEAR(c(0, 1), 0.01 * std::exp(-0.5), 1e-15);
  EXPECT_NEAR(c(0, 1), 6.0653e-3, 1e-7);
}

TEST(Covariance, SymmetricAndSemidefinite) {
  const Mesh m = build_unit_square_mesh(12, ElemKind::P1Tri);
  std::vector<Point2> pts(m.nodes().begin(), m.nodes().begin() + 150);
  const auto c = covariance_matrix(pts, GrfSpec{0.0, 1.0, 0.1, 0.0});
  EXPECT_TRUE(c == c.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-8);
}

TEST(Sample, DegenerateVarianceReturnsMean) {
  const Vec f = sample_grf(kCluster, GrfSpec{0.3, 1e-12, 0.1, 0.0}, 17);
  for (double v : f) EXPECT_NEAR(v, 0.3, 1e-5);
}

TEST(Sample, SameSeedSameField) {
  const Mesh m = build_unit_square_mesh(8, ElemKind::P1Tri);
  const GrfSpec spec;
  EXPECT_EQ(sample_grf(m.nodes(), spec, 42), sample_grf(m.nodes(), spec, 42));
  EXPECT_NE(sample_grf(m.nodes(), spec, 42), sample_grf(m.nodes(), spec, 43));
}

TEST(Sample, InvalidSpecRejected) {
  EXPECT_THROW(GrfSampler(kCluster, GrfSpec{0.0, -1.0, 0.1, 1e-10}), CovarianceNotPD);
  EXPECT_THROW(GrfSampler(kCluster, GrfSpec{0.0, 1.0, 0.0, 1e-10}), CovarianceNotPD);
}

TEST(Sample, JitterEscalatesForCoincidentPoints) {
  // duplicate points make the kernel exactly singular
  const std::vector<Point2> pts = {{0.1, 0.1}, {0.1, 0.1}, {0.4, 0.4}};
  GrfSampler s(pts, GrfSpec{0.0, 1.0, 0.1, 0.0});
  EXPECT_GT(s.jitter_used(), 0.0);
  EXPECT_LE(s.jitter_used(), 1e-6);
}

TEST(Sample, EmpiricalCovarianceMatchesKernel) {
  const GrfSpec spec{0.0, 0.1, 0.1, 1e-10};
  GrfSampler s(kCluster, spec);
  const int n = 10000;
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(5, 5);
  Vec mean = Vec::Zero(5);
  std::vector<Vec> draws;
  for (int k = 0; k < n; ++k) {
    draws.push_back(s.sample(1000 + k));
    mean += draws.back();
  }
  mean /= n;
  for (const Vec& d : draws) acc += (d - mean) * (d - mean).transpose();
  acc /= (n - 1);
  const auto c = covariance_matrix(kCluster, spec);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) EXPECT_LT(std::abs(acc(i, j) - c(i, j)) / c(i, j), 0.05) << i << "," << j;
}

TEST(ScaledGuess, NormInRangeAndShapePreserved) {
  const Mesh m = build_unit_square_mesh(6, ElemKind::P1Tri);
  GrfSampler s(m.nodes(), GrfSpec{0.0, 1.0, 0.1, 1e-10});
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Vec g = s.sample(seed);
    const Vec h = s.scaled_sample(seed);
    const double nrm = h.cwiseAbs().maxCoeff();
    EXPECT_GE(nrm, 1e-4);
    EXPECT_LE(nrm, 1e-2);
    Eigen::Index ag = 0, ah = 0;
    g.cwiseAbs().maxCoeff(&ag);
    h.cwiseAbs().maxCoeff(&ah);
    EXPECT_EQ(ag, ah);
    for (Eigen::Index i = 0; i < g.size(); ++i)
      if (g[i] != 0.0) EXPECT_EQ(std::signbit(g[i]), std::signbit(h[i]));
  }
}

TEST(ScaledGuess, LogNormIsUniform) {
  GrfSampler s(kCluster, GrfSpec{0.0, 1.0, 0.1, 1e-10});
  std::vector<double> x;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) x.push_back(std::log10(s.scaled_sample(seed).cwiseAbs().maxCoeff()));
  std::sort(x.begin(), x.end());
  double d = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double cdf = (x[i] + 4.0) / 2.0;
    d = std::max({d, std::abs((i + 1) / n - cdf), std::abs(i / n - cdf)});
  }
  EXPECT_LT(d, 1.36 / std::sqrt(n));  // Kolmogorov-Smirnov, alpha = 0.05
}

}  // namespace
}  // namespace fpno
