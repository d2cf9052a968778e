#include "fpno/grf/grf.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Cholesky>

#include "fpno/errors.hpp"

namespace fpno {

Eigen::MatrixXd covariance_matrix(const std::vector<Point2>& points, const GrfSpec& spec) {
  const auto n = static_cast<Eigen::Index>(points.size());
  const double s2 = spec.sigma * spec.sigma;
  const double inv = 1.0 / (2.0 * spec.ell * spec.ell);
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    c(i, i) = s2 + spec.jitter;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double dx = points[i].x - points[j].x;
      const double dy = points[i].y - points[j].y;
      const double v = s2 * std::exp(-(dx * dx + dy * dy) * inv);
      c(i, j) = v;
      c(j, i) = v;
    }
  }
  return c;
}

GrfSampler::GrfSampler(const std::vector<Point2>& points, const GrfSpec& spec) : spec_(spec) {
  if (!(spec.sigma > 0.0) || !(spec.ell > 0.0) || !(spec.jitter >= 0.0)) {
    throw CovarianceNotPD("GrfSpec: need sigma > 0, ell > 0, jitter >= 0");
  }
  GrfSpec trial = spec;
  for (;;) {
    Eigen::LLT<Eigen::MatrixXd> llt(covariance_matrix(points, trial));
    if (llt.info() == Eigen::Success) {
      chol_ = llt.matrixL();
      jitter_ = trial.jitter;
      return;
    }
    if (trial.jitter >= 1e-6) break;
    trial.jitter = trial.jitter > 0.0 ? std::min(trial.jitter * 10.0, 1e-6) : 1e-10;
  }
  throw CovarianceNotPD("GRF covariance not positive definite even with jitter 1e-6");
}

Vec GrfSampler::draw(std::uint64_t seed, double* uniform_out) const {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (int attempt = 0; attempt < 2; ++attempt) {
    Vec z(chol_.rows());
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = normal(gen);
    Vec g = chol_.triangularView<Eigen::Lower>() * z;
    g.array() += spec_.mean;
    if (uniform_out == nullptr) return g;
    *uniform_out = uniform(gen);
    if (max_abs(g) > 0.0) return g;
  }
  throw DataGenFailure("scaled GRF sample is identically zero twice in a row");
}

Vec GrfSampler::sample(std::uint64_t seed) const { return draw(seed, nullptr); }

Vec GrfSampler::scaled_sample(std::uint64_t seed, double lo, double hi) const {
  double u = 0.0;
  Vec g = draw(seed, &u);
  double target = std::pow(10.0, std::log10(lo) + u * (std::log10(hi) - std::log10(lo)));
  target = std::clamp(target, lo, hi);
  Eigen::Index arg = 0;
  g.cwiseAbs().maxCoeff(&arg);
  const double gmax = g[arg];
  g *= target / std::abs(gmax);
  // Pin the infinity norm to the target exactly despite rounding in the scale.
  g = g.cwiseMax(-target).cwiseMin(target);
  g[arg] = std::copysign(target, gmax);
  return g;
}

Vec sample_grf(const std::vector<Point2>& points, const GrfSpec& spec, std::uint64_t seed) {
  return GrfSampler(points, spec).sample(seed);
}

Vec scaled_initial_guess(const std::vector<Point2>& points, const GrfSpec& spec, std::uint64_t seed,
                         double lo, double hi) {
  return GrfSampler(points, spec).scaled_sample(seed, lo, hi);
}

}  // namespace fpno
