#pragma once

#include "fpno/nn/fpno_model.hpp"
#include "fpno/problems/problem.hpp"
#include "fpno/solvers/newton.hpp"

namespace fpno {

/// Nonlinear right preconditioner: maps the current iterate to an improved
/// one. `r_free` is F(u_free).
class NonlinearPreconditioner {
 public:
  virtual ~NonlinearPreconditioner() = default;
  virtual Vec apply(const NonlinearProblem& problem, const Vec& u_free, const Vec& r_free) const = 0;
};

/// Adapter for a bound FPNO.
class FpnoPreconditioner final : public NonlinearPreconditioner {
 public:
  explicit FpnoPreconditioner(BoundFpno fpno) : fpno_(std::move(fpno)) {}
  Vec apply(const NonlinearProblem& problem, const Vec& u_free, const Vec& r_free) const override {
    return fpno_.apply(problem, u_free, r_free);
  }

 private:
  BoundFpno fpno_;
};

/// Neural-preconditioned Newton. Each iteration maps u to v = M(u), keeps
/// v unless it raises |F| (guard disabled by opts.strict_paper) or inverts
/// an element, then takes one inner LS / dogleg step from the kept point.
/// A ModelNaN disables the preconditioner for the rest of the solve and
/// sets report.model_fallback.
SolveResult np_newton_with_solution(const NonlinearProblem& problem, const Vec& u0, InnerSolver inner,
                                    const NonlinearPreconditioner& precond, const SolveOptions& opts);

SolveReport np_newton(const NonlinearProblem& problem, const Vec& u0, InnerSolver inner,
                      const NonlinearPreconditioner& precond, const SolveOptions& opts);

}  // namespace fpno
