#pragma once

#include <Eigen/Core>

namespace fpno {

using Vec = Eigen::VectorXd;

// Dense vector kernels. All of them throw DimensionError on length mismatch.
//
// norm2 uses Kahan-compensated accumulation of squares (after scaling by the
// max-abs entry), so residual norms are reproducible for very long vectors
// and never overflow.
double dot(const Vec& x, const Vec& y);
double norm2(const Vec& x);
double max_abs(const Vec& x);
void axpy(double alpha, const Vec& x, Vec& y);  // y += alpha * x
void scale(double alpha, Vec& x);

}  // namespace fpno
