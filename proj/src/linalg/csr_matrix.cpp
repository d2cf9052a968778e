#include "fpno/linalg/csr_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fpno/errors.hpp"

namespace fpno {

CsrMatrix::CsrMatrix(std::int64_t nrows, std::int64_t ncols, std::vector<std::int64_t> row_ptr,
                     std::vector<std::int64_t> col_idx, std::vector<double> values)
    : nrows_(nrows),
      ncols_(ncols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (nrows_ < 0 || ncols_ < 0 || static_cast<std::int64_t>(row_ptr_.size()) != nrows_ + 1 ||
      col_idx_.size() != values_.size() || row_ptr_.back() != nnz()) {
    throw DimensionError("CsrMatrix: inconsistent storage arrays");
  }
  for (std::int64_t i = 0; i < nrows_; ++i) {
    if (row_ptr_[i] > row_ptr_[i + 1]) throw DimensionError("CsrMatrix: row_ptr not monotone");
    for (std::int64_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (col_idx_[k] < 0 || col_idx_[k] >= ncols_) throw IndexError("CsrMatrix: column out of range");
      if (k > row_ptr_[i] && col_idx_[k] <= col_idx_[k - 1]) {
        throw DimensionError("CsrMatrix: columns not strictly increasing");
      }
    }
  }
}

CsrMatrix CsrMatrix::from_triplets(const std::vector<Triplet>& triplets, std::int64_t nrows,
                                   std::int64_t ncols) {
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= nrows || t.col < 0 || t.col >= ncols) {
      throw IndexError("csr_from_triplets: entry (" + std::to_string(t.row) + ", " +
                       std::to_string(t.col) + ") outside " + std::to_string(nrows) + "x" +
                       std::to_string(ncols));
    }
  }
  // Stable sort keeps duplicate summation order fixed, so assembly is bit-reproducible.
  std::vector<std::size_t> order(triplets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ta = triplets[a];
    const auto& tb = triplets[b];
    return ta.row != tb.row ? ta.row < tb.row : ta.col < tb.col;
  });

  std::vector<std::int64_t> row_ptr(nrows + 1, 0);
  std::vector<std::int64_t> col_idx;
  std::vector<double> values;
  col_idx.reserve(triplets.size());
  values.reserve(triplets.size());
  std::int64_t last_row = -1;
  std::int64_t last_col = -1;
  for (std::size_t k : order) {
    const auto& t = triplets[k];
    if (t.row == last_row && t.col == last_col) {
      values.back() += t.value;
      continue;
    }
    col_idx.push_back(t.col);
    values.push_back(t.value);
    ++row_ptr[t.row + 1];
    last_row = t.row;
    last_col = t.col;
  }
  for (std::int64_t i = 0; i < nrows; ++i) row_ptr[i + 1] += row_ptr[i];
  return CsrMatrix(nrows, ncols, std::move(row_ptr), std::move(col_idx), std::move(values));
}

CsrMatrix CsrMatrix::from_dense(const Eigen::MatrixXd& dense) {
  std::vector<Triplet> trips;
  for (Eigen::Index i = 0; i < dense.rows(); ++i) {
    for (Eigen::Index j = 0; j < dense.cols(); ++j) {
      if (dense(i, j) != 0.0) trips.push_back({i, j, dense(i, j)});
    }
  }
  return from_triplets(trips, dense.rows(), dense.cols());
}

CsrMatrix CsrMatrix::identity(std::int64_t n) {
  std::vector<std::int64_t> row_ptr(n + 1);
  std::vector<std::int64_t> col_idx(n);
  std::iota(row_ptr.begin(), row_ptr.end(), std::int64_t{0});
  std::iota(col_idx.begin(), col_idx.end(), std::int64_t{0});
  return CsrMatrix(n, n, std::move(row_ptr), std::move(col_idx), std::vector<double>(n, 1.0));
}

double CsrMatrix::at(std::int64_t i, std::int64_t j) const {
  if (i < 0 || i >= nrows_ || j < 0 || j >= ncols_) throw IndexError("CsrMatrix::at out of range");
  const auto first = col_idx_.begin() + row_ptr_[i];
  const auto last = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(first, last, j);
  return (it != last && *it == j) ? values_[it - col_idx_.begin()] : 0.0;
}

double CsrMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

Vec CsrMatrix::multiply(const Vec& x) const {
  if (x.size() != ncols_) throw DimensionError("CsrMatrix::multiply: length mismatch");
  Vec y = Vec::Zero(nrows_);
  for (std::int64_t i = 0; i < nrows_; ++i) {
    double s = 0.0;
    for (std::int64_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * x[col_idx_[k]];
    y[i] = s;
  }
  return y;
}

Vec CsrMatrix::multiply_transpose(const Vec& x) const {
  if (x.size() != nrows_) throw DimensionError("CsrMatrix::multiply_transpose: length mismatch");
  Vec y = Vec::Zero(ncols_);
  for (std::int64_t i = 0; i < nrows_; ++i) {
    for (std::int64_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) y[col_idx_[k]] += values_[k] * x[i];
  }
  return y;
}

CsrMatrix CsrMatrix::transpose() const {
  std::vector<Triplet> trips;
  trips.reserve(values_.size());
  for (std::int64_t i = 0; i < nrows_; ++i) {
    for (std::int64_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      trips.push_back({col_idx_[k], i, values_[k]});
    }
  }
  return from_triplets(trips, ncols_, nrows_);
}

Eigen::MatrixXd CsrMatrix::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(nrows_, ncols_);
  for (std::int64_t i = 0; i < nrows_; ++i) {
    for (std::int64_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) d(i, col_idx_[k]) = values_[k];
  }
  return d;
}

}  // namespace fpno
