#include "fpno/training/loss.hpp"

#include "fpno/errors.hpp"

namespace fpno {

namespace {
void check(const Matrix& pred, const Matrix& ref) {
  if (pred.rows() != ref.rows() || pred.cols() != ref.cols()) throw DimensionError("loss: shape mismatch");
  if (pred.size() == 0) throw DimensionError("loss: empty batch");
}
}  // namespace

double rel_mse_loss(const Matrix& pred, const Matrix& ref, double eps) {
  check(pred, ref);
  const auto diff = (pred - ref).array();
  return (diff.square() / (ref.array().square() + eps)).mean();
}

Matrix rel_mse_grad(const Matrix& pred, const Matrix& ref, double eps) {
  check(pred, ref);
  const double n = static_cast<double>(pred.size());
  return (2.0 * (pred - ref).array() / (ref.array().square() + eps) / n).matrix();
}

double mean_rel_l2(const Matrix& pred, const Matrix& ref) {
  check(pred, ref);
  double sum = 0.0;
  for (Eigen::Index j = 0; j < pred.cols(); ++j) sum += (pred.col(j) - ref.col(j)).norm() / ref.col(j).norm();
  return sum / static_cast<double>(pred.cols());
}

}  // namespace fpno
