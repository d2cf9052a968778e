#include "fpno/linalg/vector_ops.hpp"

#include <cmath>
#include <string>

#include "fpno/errors.hpp"

namespace fpno {
namespace {

void require_same(const Vec& x, const Vec& y, const char* op) {
  if (x.size() != y.size()) {
    throw DimensionError(std::string(op) + ": length mismatch " + std::to_string(x.size()) +
                         " vs " + std::to_string(y.size()));
  }
}

}  // namespace

double dot(const Vec& x, const Vec& y) {
  require_same(x, y, "dot");
  double sum = 0.0;
  double comp = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double term = x[i] * y[i] - comp;
    const double next = sum + term;
    comp = (next - sum) - term;
    sum = next;
  }
  return sum;
}

double norm2(const Vec& x) {
  const double amax = max_abs(x);
  if (amax == 0.0 || !std::isfinite(amax)) return amax;
  double sum = 0.0;
  double comp = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double s = x[i] / amax;
    const double term = s * s - comp;
    const double next = sum + term;
    comp = (next - sum) - term;
    sum = next;
  }
  return amax * std::sqrt(sum);
}

double max_abs(const Vec& x) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double a = std::abs(x[i]);
    if (std::isnan(a)) return a;
    if (a > m) m = a;
  }
  return m;
}

void axpy(double alpha, const Vec& x, Vec& y) {
  require_same(x, y, "axpy");
  for (Eigen::Index i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scale(double alpha, Vec& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] *= alpha;
}

}  // namespace fpno
