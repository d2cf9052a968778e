#include "fpno/linalg/lu.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "fpno/errors.hpp"

namespace fpno {

namespace {
constexpr double kPivotThreshold = 1e-14;
using SpMat = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
}  // namespace

struct LuFactors::Impl {
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
};

LuFactors::LuFactors(const CsrMatrix& a) : impl_(std::make_unique<Impl>()), n_(a.rows()) {
  if (a.rows() != a.cols()) throw DimensionError("lu_factorize: matrix is not square");
  const double amax = a.max_abs();
  if (n_ == 0) return;
  if (amax == 0.0 || !std::isfinite(amax)) throw SingularMatrix("lu_factorize: zero or non-finite matrix");

  std::vector<Eigen::Triplet<double, int>> trips;
  trips.reserve(a.nnz());
  for (std::int64_t i = 0; i < a.rows(); ++i) {
    for (std::int64_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
      trips.emplace_back(static_cast<int>(i), static_cast<int>(a.col_idx()[k]), a.values()[k]);
    }
  }
  SpMat m(static_cast<int>(n_), static_cast<int>(n_));
  m.setFromTriplets(trips.begin(), trips.end());
  m.makeCompressed();

  impl_->lu.analyzePattern(m);
  impl_->lu.factorize(m);
  if (impl_->lu.info() != Eigen::Success) {
    throw SingularMatrix("lu_factorize: " + impl_->lu.lastErrorMessage());
  }

  // The diagonal of U lives in the supernodal L storage.
  const auto& supernodal = impl_->lu.matrixL().m_mapL;
  min_pivot_ = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < supernodal.cols(); ++j) {
    double pivot = 0.0;
    for (typename std::decay_t<decltype(supernodal)>::InnerIterator it(supernodal, j); it; ++it) {
      if (it.index() == j) {
        pivot = std::abs(it.value());
        break;
      }
    }
    min_pivot_ = std::min(min_pivot_, pivot);
  }
  if (!(min_pivot_ > kPivotThreshold * amax)) {
    throw SingularMatrix("lu_factorize: pivot " + std::to_string(min_pivot_) + " below threshold");
  }
}

LuFactors::~LuFactors() = default;
LuFactors::LuFactors(LuFactors&&) noexcept = default;
LuFactors& LuFactors::operator=(LuFactors&&) noexcept = default;

Vec LuFactors::solve(const Vec& b) const {
  if (b.size() != n_) throw DimensionError("solve: right-hand side length mismatch");
  if (n_ == 0) return b;
  Vec x = impl_->lu.solve(b);
  return x;
}

}  // namespace fpno
