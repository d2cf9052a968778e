#pragma once

#include <memory>

#include "fpno/linalg/csr_matrix.hpp"
#include "fpno/linalg/vector_ops.hpp"

namespace fpno {

/// Sparse LU factors (column-approximate-minimum-degree ordering with
/// threshold partial pivoting). Immutable once built; solve is reentrant.
class LuFactors {
 public:
  /// Throws SingularMatrix when a pivot falls below 1e-14 * max|A|, and
  /// DimensionError for non-square input.
  explicit LuFactors(const CsrMatrix& a);
  ~LuFactors();
  LuFactors(LuFactors&&) noexcept;
  LuFactors& operator=(LuFactors&&) noexcept;

  std::int64_t size() const { return n_; }

  /// Smallest |U_jj| of the factorization.
  double min_pivot() const { return min_pivot_; }

  Vec solve(const Vec& b) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::int64_t n_ = 0;
  double min_pivot_ = 0.0;
};

inline LuFactors lu_factorize(const CsrMatrix& a) { return LuFactors(a); }
inline Vec solve(const LuFactors& fac, const Vec& b) { return fac.solve(b); }

}  // namespace fpno
