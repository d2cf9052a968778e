#pragma once

#include <Eigen/Core>

namespace fpno {

using Matrix = Eigen::MatrixXd;

/// Exact GELU, x * Phi(x) with Phi the standard normal CDF.
double gelu(double x);
double gelu_grad(double x);

Matrix gelu(const Matrix& x);
Matrix gelu_grad(const Matrix& x);

/// Column-wise softmax (each column sums to 1), max-shifted for stability.
Matrix softmax_columns(const Matrix& x);

}  // namespace fpno
