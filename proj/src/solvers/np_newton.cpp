#include "fpno/solvers/np_newton.hpp"

#include <chrono>
#include <cmath>

#include "fpno/errors.hpp"
#include "fpno/solvers/convergence.hpp"

namespace fpno {

SolveResult np_newton_with_solution(const NonlinearProblem& problem, const Vec& u0, InnerSolver inner,
                                    const NonlinearPreconditioner& precond, const SolveOptions& opts) {
  validate(opts);
  const auto start = std::chrono::steady_clock::now();
  SolveResult res;
  SolveReport& rep = res.report;
  res.solution = u0;

  TrialEval t0 = evaluate(problem, u0);
  if (t0.inverted) {
    rep.outcome = Outcome::Diverged;
    rep.detail = "element inversion at the initial guess";
    return res;
  }
  Vec f = std::move(t0.f);
  double f_norm = t0.norm;
  const double r0 = f_norm;
  rep.history.push_back({0, r0, r0 > 0.0 ? 1.0 : 0.0, 0.0, false});

  TrustRegionStepper tr(opts);
  Vec& u = res.solution;
  bool model_active = true;
  for (;;) {
    const ConvergenceState state = check_convergence(f_norm, r0, opts);
    if (state == ConvergenceState::Converged) {
      rep.outcome = Outcome::Converged;
      break;
    }
    if (state == ConvergenceState::Diverged) {
      rep.outcome = Outcome::Diverged;
      rep.detail = "relative residual above divergence cap";
      break;
    }
    if (rep.iterations >= opts.max_iters) {
      rep.outcome = Outcome::MaxIters;
      break;
    }

    bool used = false;
    if (model_active) {
      try {
        Vec v = precond.apply(problem, u, f);
        if (v != u) {
          TrialEval tv = evaluate(problem, v);
          const bool usable = !tv.inverted && std::isfinite(tv.norm);
          if (usable && (opts.strict_paper || tv.norm <= f_norm)) {
            u = std::move(v);
            f = std::move(tv.f);
            f_norm = tv.norm;
            used = true;
          }
        }
      } catch (const ModelNaN&) {
        model_active = false;
        rep.model_fallback = true;
      }
    }

    StepResult s;
    if (used && check_convergence(f_norm, r0, opts) != ConvergenceState::Continue) {
      s.status = StepStatus::Accepted;
      s.u = u;
      s.f = f;
      s.norm = f_norm;
    } else {
      s = inner == InnerSolver::LineSearch ? line_search_step(problem, u, f, f_norm, opts)
                                           : tr.step(problem, u, f, f_norm);
    }
    if (s.status == StepStatus::LinearFailed) {
      rep.outcome = Outcome::LinearSolveFailed;
      rep.detail = "singular Jacobian";
      break;
    }
    if (s.status == StepStatus::Inverted) {
      rep.outcome = Outcome::Diverged;
      rep.detail = "element inversion";
      break;
    }
    ++rep.iterations;
    u = std::move(s.u);
    f = std::move(s.f);
    f_norm = s.norm;
    rep.history.push_back({rep.iterations, f_norm, r0 > 0.0 ? f_norm / r0 : 0.0, s.step, used});
  }
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

SolveReport np_newton(const NonlinearProblem& problem, const Vec& u0, InnerSolver inner,
                      const NonlinearPreconditioner& precond, const SolveOptions& opts) {
  return np_newton_with_solution(problem, u0, inner, precond, opts).report;
}

}  // namespace fpno
