#pragma once

#include "fpno/linalg/csr_matrix.hpp"
#include "fpno/mesh/mesh.hpp"

namespace fpno {

/// Node-level transfer between nested structured meshes.
///
/// `prolongation` (fine x coarse) is nodal P1 / bilinear Q1 interpolation,
/// `restriction` (coarse x fine) is injection at coincident nodes, so that
/// restriction * prolongation is the identity on coarse vectors. Vectors
/// with d interleaved components are handled by the apply helpers.
struct TransferOps {
  CsrMatrix prolongation;
  CsrMatrix restriction;

  std::size_t coarse_nodes() const { return static_cast<std::size_t>(prolongation.cols()); }
  std::size_t fine_nodes() const { return static_cast<std::size_t>(prolongation.rows()); }

  Vec prolong(const Vec& coarse, int components = 1) const;
  Vec restrict_to_coarse(const Vec& fine, int components = 1) const;
};

/// Throws TransferError unless `fine` is a nested refinement of `coarse`
/// (same element kind, same hole, fine.n a multiple of coarse.n).
TransferOps build_transfer(const Mesh& coarse, const Mesh& fine);

}  // namespace fpno
