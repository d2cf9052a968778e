#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "fpno/linalg/vector_ops.hpp"
#include "fpno/mesh/mesh.hpp"

namespace fpno {

/// Gaussian random field with squared-exponential covariance
///   cov(f(x), f(y)) = sigma^2 exp(-|x - y|^2 / (2 ell^2)).
struct GrfSpec {
  double mean = 0.0;
  double sigma = 0.1;
  double ell = 0.1;
  double jitter = 1e-10;
};

Eigen::MatrixXd covariance_matrix(const std::vector<Point2>& points, const GrfSpec& spec);

/// mean + L z with C = L L^T and z ~ N(0, I) drawn from a mt19937_64 seeded
/// with `seed`. The jitter is escalated by x10 (up to 1e-6) until the
/// Cholesky factorization succeeds; otherwise CovarianceNotPD.
///
/// Parallel callers derive per-sample seeds as base_seed + sample_index.
Vec sample_grf(const std::vector<Point2>& points, const GrfSpec& spec, std::uint64_t seed);

/// Factor once, draw many: used when many fields share one point set.
class GrfSampler {
 public:
  GrfSampler(const std::vector<Point2>& points, const GrfSpec& spec);

  Vec sample(std::uint64_t seed) const;

  /// A field g = sample(seed) rescaled so that |g|_inf equals a target
  /// drawn log-uniformly in [lo, hi] from the same random stream.
  Vec scaled_sample(std::uint64_t seed, double lo = 1e-4, double hi = 1e-2) const;

  std::size_t size() const { return static_cast<std::size_t>(chol_.rows()); }
  double jitter_used() const { return jitter_; }

 private:
  Vec draw(std::uint64_t seed, double* uniform_out) const;

  GrfSpec spec_;
  Eigen::MatrixXd chol_;
  double jitter_ = 0.0;
};

Vec scaled_initial_guess(const std::vector<Point2>& points, const GrfSpec& spec, std::uint64_t seed,
                         double lo = 1e-4, double hi = 1e-2);

}  // namespace fpno
