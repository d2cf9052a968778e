#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "fpno/linalg/vector_ops.hpp"

namespace fpno {

struct Triplet {
  std::int64_t row;
  std::int64_t col;
  double value;
};

/// Compressed sparse row storage. Column indices are strictly increasing
/// within each row.
class CsrMatrix {
 public:
  CsrMatrix() = default;
  CsrMatrix(std::int64_t nrows, std::int64_t ncols, std::vector<std::int64_t> row_ptr,
            std::vector<std::int64_t> col_idx, std::vector<double> values);

  /// Sums duplicates; throws IndexError on out-of-range entries.
  static CsrMatrix from_triplets(const std::vector<Triplet>& triplets, std::int64_t nrows,
                                 std::int64_t ncols);
  static CsrMatrix from_dense(const Eigen::MatrixXd& dense);
  static CsrMatrix identity(std::int64_t n);

  std::int64_t rows() const { return nrows_; }
  std::int64_t cols() const { return ncols_; }
  std::int64_t nnz() const { return static_cast<std::int64_t>(values_.size()); }

  const std::vector<std::int64_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::int64_t>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }

  /// Entry (i, j), zero when not stored.
  double at(std::int64_t i, std::int64_t j) const;
  double max_abs() const;

  Vec multiply(const Vec& x) const;
  Vec multiply_transpose(const Vec& x) const;
  CsrMatrix transpose() const;
  Eigen::MatrixXd to_dense() const;

 private:
  std::int64_t nrows_ = 0;
  std::int64_t ncols_ = 0;
  std::vector<std::int64_t> row_ptr_{0};
  std::vector<std::int64_t> col_idx_;
  std::vector<double> values_;
};

/// Free-function spelling used by assembly code.
inline CsrMatrix csr_from_triplets(const std::vector<Triplet>& triplets, std::int64_t nrows,
                                   std::int64_t ncols) {
  return CsrMatrix::from_triplets(triplets, nrows, ncols);
}

}  // namespace fpno
