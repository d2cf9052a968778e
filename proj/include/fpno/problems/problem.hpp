#pragma once

#include <memory>
#include <vector>

#include "fpno/linalg/csr_matrix.hpp"
#include "fpno/linalg/vector_ops.hpp"
#include "fpno/mesh/dofmap.hpp"
#include "fpno/mesh/mesh.hpp"
#include "fpno/mesh/quadrature.hpp"

namespace fpno {

/// F : R^n -> R^n with its Jacobian. This is all the plain Newton solvers
/// need; residual and jacobian must be reentrant.
class NonlinearSystem {
 public:
  virtual ~NonlinearSystem() = default;
  virtual std::int64_t size() const = 0;
  virtual Vec residual(const Vec& u) const = 0;
  virtual CsrMatrix jacobian(const Vec& u) const = 0;
};

/// A finite-element discretized parametric problem on a mesh. Vectors passed
/// to residual/jacobian are over the free dofs; Dirichlet values are
/// substituted internally.
class NonlinearProblem : public NonlinearSystem {
 public:
  NonlinearProblem(std::shared_ptr<const Mesh> mesh, DofMap dofmap);

  virtual ProblemKind kind() const = 0;

  /// Parameter vector fed to the feature branch of the neural operator:
  /// nodal forcing for Poisson, [u_t] for elasticity.
  virtual Vec zeta() const = 0;
  /// True when zeta is a nodal field that must be transferred between meshes.
  virtual bool zeta_is_nodal() const = 0;

  std::int64_t size() const override { return dofmap_.num_free(); }
  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  const DofMap& dofmap() const { return dofmap_; }

  /// Zero on free dofs, prescribed values on constrained dofs (free part).
  Vec zero_initial_guess() const { return Vec::Zero(size()); }

 protected:
  void check_size(const Vec& u, const char* op) const;
  const std::vector<ElementGeometry>& geometry(std::size_t elem) const { return geometry_[elem]; }

  std::shared_ptr<const Mesh> mesh_;
  DofMap dofmap_;

 private:
  std::vector<std::vector<ElementGeometry>> geometry_;
};

}  // namespace fpno
