#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "fpno/mesh/dofmap.hpp"
#include "fpno/mesh/mesh.hpp"
#include "fpno/mesh/transfer.hpp"
#include "fpno/nn/mionet.hpp"
#include "fpno/nn/network.hpp"
#include "fpno/problems/problem.hpp"

namespace fpno {

/// Layer widths of the four sub-networks. Input/output widths are filled in
/// from the training mesh by `FpnoArchitecture::make`.
struct FpnoArchitecture {
  ProblemKind problem = ProblemKind::NonlinearPoisson;
  MeshDescriptor mesh;
  int components = 1;
  int zeta_dim = 0;
  int latent = 0;
  int reduction = 4;
  std::vector<int> scaling;  // SE-ResNet [ndof, ..., 1]
  std::vector<int> branch;   // SE-ResNet [ndof, ..., d * p]
  std::vector<int> feature;  // SE-ResNet [zeta_dim, ..., p]
  std::vector<int> trunk;    // ResNet [2, ..., p]

  /// Architecture with `depth` hidden layers of `width` in every
  /// sub-network (scaling net: `depth - 1`), latent size p.
  static FpnoArchitecture make(ProblemKind problem, const MeshDescriptor& mesh, int width, int latent,
                               int depth = 3);

  bool operator==(const FpnoArchitecture&) const = default;
};

/// Fixed-point neural operator
///   G(u) = u + eta * G_B(u, zeta),  eta = tanh(|r| * N(r / |r|)),
/// evaluated on its training mesh.
class FpnoModel {
 public:
  /// Fresh model: Kaiming init from `seed`, final scaling layer zero, so
  /// that the untrained model is the identity.
  FpnoModel(const FpnoArchitecture& arch, std::uint64_t seed);
  /// Model from existing networks (deserialization).
  FpnoModel(const FpnoArchitecture& arch, Network scaling, MioNet backbone);

  const FpnoArchitecture& architecture() const { return arch_; }
  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  int components() const { return arch_.components; }
  std::int64_t num_dofs() const { return static_cast<std::int64_t>(mesh_->num_nodes()) * arch_.components; }
  /// 2 x K coordinates of the training-mesh nodes.
  const Matrix& coords() const { return coords_; }

  const Network& scaling() const { return scaling_; }
  const MioNet& backbone() const { return backbone_; }

  std::int64_t num_params() const;
  /// Concatenation scaling | branch | feature | trunk.
  Vec params() const;
  void set_params(const Vec& params);

  /// Batched evaluation on the training mesh. Columns are samples:
  ///   u:       current iterates (full dof vectors)
  ///   r_unit:  normalized residuals
  ///   r_norm:  residual norms (one per sample)
  ///   zeta:    parameters
  /// Returns u + eta * G_B(u, zeta) column-wise; columns with r_norm == 0
  /// are returned unchanged.
  Matrix predict(const Matrix& u, const Matrix& r_unit, const Vec& r_norm, const Matrix& zeta) const;

  struct Tape {
    ::fpno::Tape scaling;
    MioNet::Tape backbone;
    Vec r_norm;
    Vec eta;
    Matrix correction;
  };
  Matrix predict(const Matrix& u, const Matrix& r_unit, const Vec& r_norm, const Matrix& zeta, Tape& tape) const;
  /// Accumulates dL/dparams (layout of params()) into `grad`.
  void backward(const Tape& tape, const Matrix& dpred, Vec& grad) const;

 private:
  void check_inputs(const Matrix& u, const Matrix& r_unit, const Vec& r_norm, const Matrix& zeta) const;

  FpnoArchitecture arch_;
  std::shared_ptr<const Mesh> mesh_;
  Matrix coords_;
  Network scaling_;
  MioNet backbone_;
};

/// The FPNO bound to a problem on a (possibly finer) solve mesh:
/// M = P o G o R, with eta computed from the solve-mesh residual.
class BoundFpno {
 public:
  /// Throws TransferError when the solve mesh is not a nested refinement
  /// of the model's training mesh.
  BoundFpno(std::shared_ptr<const FpnoModel> model, const Mesh& solve_mesh);

  const FpnoModel& model() const { return *model_; }

  /// v = u + eta * P G_B(R u, R zeta) with Dirichlet dofs reset, over the
  /// free dofs of `problem`. `r_free` must be F(u_free). Returns u_free
  /// unchanged when |r| = 0. Throws ModelNaN on non-finite network output.
  Vec apply(const NonlinearProblem& problem, const Vec& u_free, const Vec& r_free) const;

 private:
  std::shared_ptr<const FpnoModel> model_;
  std::optional<TransferOps> transfer_;  // empty when solving on the training mesh
};

/// Convenience: computes r = F(u) and applies the bound model.
Vec fpno_apply(const BoundFpno& fpno, const NonlinearProblem& problem, const Vec& u_free);

}  // namespace fpno
