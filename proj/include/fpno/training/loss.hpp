#pragma once

#include "fpno/nn/activations.hpp"

namespace fpno {

constexpr double kRelMseEps = 1e-4;

/// Mean over every entry of (pred - ref)^2 / (ref^2 + eps).
double rel_mse_loss(const Matrix& pred, const Matrix& ref, double eps = kRelMseEps);
/// d loss / d pred.
Matrix rel_mse_grad(const Matrix& pred, const Matrix& ref, double eps = kRelMseEps);

/// Mean over columns of |pred_j - ref_j|_2 / |ref_j|_2.
double mean_rel_l2(const Matrix& pred, const Matrix& ref);

}  // namespace fpno
