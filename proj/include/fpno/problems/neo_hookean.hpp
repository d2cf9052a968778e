#pragma once

#include "fpno/problems/problem.hpp"

namespace fpno {

/// Compressible Neo-Hookean material. `top_displacement` is the prescribed
/// vertical displacement u_t of the top edge (the parameter zeta).
struct ElasticityParams {
  double top_displacement = 0.0;
  double youngs_modulus = 1.0;
  double poisson_ratio = 0.49;

  double mu() const { return youngs_modulus / (2.0 * (1.0 + poisson_ratio)); }
  double lame_lambda() const {
    return youngs_modulus * poisson_ratio / ((1.0 + poisson_ratio) * (1.0 - 2.0 * poisson_ratio));
  }
};

/// Plane-strain Neo-Hookean body on a Q1 mesh: bottom clamped, top moved by
/// (0, u_t), remaining boundary traction free. The deformation gradient is
/// embedded in 3D with F33 = 1, so I_c = tr(F^T F) + 1 and J = det F.
///
/// Residual and tangent throw ElementInversion when det F <= 0 at any
/// quadrature point.
class NeoHookeanProblem final : public NonlinearProblem {
 public:
  NeoHookeanProblem(std::shared_ptr<const Mesh> mesh, ElasticityParams params);

  ProblemKind kind() const override { return ProblemKind::NeoHookean; }
  Vec zeta() const override { return Vec::Constant(1, params_.top_displacement); }
  bool zeta_is_nodal() const override { return false; }

  const ElasticityParams& params() const { return params_; }

  /// Stored energy  int mu/2 (I_c - 3) - mu ln J + lambda/2 (J - 1)^2.
  double energy(const Vec& u_free) const;
  /// First variation: first Piola-Kirchhoff stress against test gradients.
  Vec residual(const Vec& u_free) const override;
  /// Consistent tangent (Hessian of the energy).
  CsrMatrix jacobian(const Vec& u_free) const override;

 private:
  ElasticityParams params_;
};

}  // namespace fpno
