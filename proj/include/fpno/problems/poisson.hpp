#pragma once

#include "fpno/problems/problem.hpp"

namespace fpno {

/// Nonlinear diffusion -div(q(u) grad u) = f with q(u) = q0 + q2 u^2,
/// u = 1 on x = 1, homogeneous Neumann elsewhere.
struct PoissonParams {
  Vec forcing;  // nodal values of f; the parameter zeta
  double q0 = 0.01;
  double q2 = 1.0;

  double q(double u) const { return q0 + q2 * u * u; }
  double dq(double u) const { return 2.0 * q2 * u; }
};

class PoissonProblem final : public NonlinearProblem {
 public:
  PoissonProblem(std::shared_ptr<const Mesh> mesh, PoissonParams params);

  ProblemKind kind() const override { return ProblemKind::NonlinearPoisson; }
  Vec zeta() const override { return params_.forcing; }
  bool zeta_is_nodal() const override { return true; }

  const PoissonParams& params() const { return params_; }

  /// Galerkin residual  int q(u) grad u . grad v - int f v  on free dofs.
  Vec residual(const Vec& u_free) const override;
  /// Exact tangent  int q(u) grad phi_j . grad phi_i + q'(u) phi_j grad u . grad phi_i.
  CsrMatrix jacobian(const Vec& u_free) const override;

 private:
  PoissonParams params_;
};

}  // namespace fpno
