#include "fpno/solvers/newton.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "fpno/errors.hpp"
#include "fpno/linalg/lu.hpp"
#include "fpno/solvers/convergence.hpp"

namespace fpno {

TrialEval evaluate(const NonlinearSystem& system, const Vec& u) {
  TrialEval t;
  try {
    t.f = system.residual(u);
    t.norm = norm2(t.f);
  } catch (const ElementInversion&) {
    t.inverted = true;
    t.norm = std::numeric_limits<double>::infinity();
  }
  return t;
}

StepResult line_search_step(const NonlinearSystem& system, const Vec& u, const Vec& f, double f_norm,
                            const SolveOptions& opts) {
  StepResult out;
  Vec p;
  try {
    const LuFactors lu(system.jacobian(u));
    p = -lu.solve(f);
  } catch (const SingularMatrix&) {
    out.status = StepStatus::LinearFailed;
    return out;
  } catch (const ElementInversion&) {
    out.status = StepStatus::Inverted;
    return out;
  }

  const double merit0 = 0.5 * f_norm * f_norm;
  const double slope = -f_norm * f_norm;  // d/dlambda of the merit along an exact Newton direction
  const auto& ls = opts.ls;

  double lambda = 1.0;
  double prev_lambda = 0.0;
  double prev_merit = 0.0;
  bool have_prev = false;
  for (int bt = 0; bt <= ls.max_backtracks; ++bt) {
    Vec trial = u + lambda * p;
    TrialEval t = evaluate(system, trial);
    const double merit = 0.5 * t.norm * t.norm;
    if (!t.inverted && std::isfinite(merit) && merit <= merit0 + ls.armijo_c1 * lambda * slope) {
      out.status = StepStatus::Accepted;
      out.u = std::move(trial);
      out.f = std::move(t.f);
      out.norm = t.norm;
      out.step = lambda;
      return out;
    }

    double next;
    if (t.inverted || !std::isfinite(merit)) {
      next = 0.5 * lambda;
      have_prev = false;
    } else if (!have_prev) {
      next = -slope * lambda * lambda / (2.0 * (merit - merit0 - slope * lambda));
    } else {
      const double t1 = merit - merit0 - lambda * slope;
      const double t2 = prev_merit - merit0 - prev_lambda * slope;
      const double a = (t1 / (lambda * lambda) - t2 / (prev_lambda * prev_lambda)) / (lambda - prev_lambda);
      const double b = (-prev_lambda * t1 / (lambda * lambda) + lambda * t2 / (prev_lambda * prev_lambda)) /
                       (lambda - prev_lambda);
      if (a == 0.0) {
        next = -slope / (2.0 * b);
      } else {
        const double disc = b * b - 3.0 * a * slope;
        if (disc < 0.0) {
          next = 0.5 * lambda;
        } else if (b <= 0.0) {
          next = (-b + std::sqrt(disc)) / (3.0 * a);
        } else {
          next = -slope / (b + std::sqrt(disc));
        }
      }
    }
    if (!std::isfinite(next)) next = 0.5 * lambda;
    if (!t.inverted && std::isfinite(merit)) {
      prev_lambda = lambda;
      prev_merit = merit;
      have_prev = true;
    }
    lambda = std::clamp(next, 0.1 * lambda, 0.5 * lambda);
    if (lambda < ls.lambda_min) break;
  }

  // Stagnation guard: take the tiny step and let the divergence cap decide.
  lambda = std::max(lambda, ls.lambda_min);
  Vec trial = u + lambda * p;
  TrialEval t = evaluate(system, trial);
  out.step = lambda;
  if (t.inverted) {
    out.status = StepStatus::Inverted;
    return out;
  }
  out.status = StepStatus::Stagnated;
  out.u = std::move(trial);
  out.f = std::move(t.f);
  out.norm = t.norm;
  return out;
}

TrustRegionStepper::TrustRegionStepper(const SolveOptions& opts)
    : opts_(opts), radius_(opts.tr.initial_radius) {}

StepResult TrustRegionStepper::step(const NonlinearSystem& system, const Vec& u, const Vec& f,
                                    double f_norm) {
  const auto& tr = opts_.tr;
  StepResult out;
  out.step = radius_;

  const bool reuse = cache_ && cache_->u.size() == u.size() && cache_->u == u;
  if (!reuse) {
    Linearization lin;
    lin.u = u;
    try {
      lin.jac = system.jacobian(u);
    } catch (const ElementInversion&) {
      out.status = StepStatus::Inverted;
      return out;
    }
    try {
      const LuFactors lu(lin.jac);
      lin.newton_step = -lu.solve(f);
      singular_streak_ = 0;
    } catch (const SingularMatrix&) {
      if (++singular_streak_ > tr.max_singular_fallbacks) {
        out.status = StepStatus::LinearFailed;
        return out;
      }
    }
    cache_ = std::move(lin);
  }
  const CsrMatrix& jac = cache_->jac;
  const std::optional<Vec>& p_newton = cache_->newton_step;

  Vec p;
  if (p_newton && norm2(*p_newton) <= radius_) {
    p = *p_newton;
  } else {
    const Vec g = jac.multiply_transpose(f);
    const double g_norm = norm2(g);
    if (g_norm == 0.0) {
      out.status = StepStatus::LinearFailed;
      return out;
    }
    const Vec jg = jac.multiply(g);
    const double jg_norm = norm2(jg);
    const double tau = (g_norm * g_norm) / (jg_norm * jg_norm);
    const Vec p_cauchy = -tau * g;
    const double pc_norm = tau * g_norm;
    if (pc_norm >= radius_) {
      p = -(radius_ / g_norm) * g;
    } else if (!p_newton) {
      p = p_cauchy;
    } else {
      // Point on the segment p_cauchy -> p_newton at distance radius.
      const Vec d = *p_newton - p_cauchy;
      const double a = dot(d, d);
      const double b = 2.0 * dot(p_cauchy, d);
      const double c = pc_norm * pc_norm - radius_ * radius_;
      const double s = (-b + std::sqrt(b * b - 4.0 * a * c)) / (2.0 * a);
      p = p_cauchy + s * d;
    }
  }

  const double merit0 = 0.5 * f_norm * f_norm;
  const Vec model_f = f + jac.multiply(p);
  const double model_norm = norm2(model_f);
  const double predicted = merit0 - 0.5 * model_norm * model_norm;

  Vec trial = u + p;
  TrialEval t = evaluate(system, trial);
  double rho = -std::numeric_limits<double>::infinity();
  if (!t.inverted && std::isfinite(t.norm) && predicted > 0.0) {
    rho = (merit0 - 0.5 * t.norm * t.norm) / predicted;
  }

  const double p_norm = norm2(p);
  if (rho < 0.25) {
    radius_ = tr.shrink * radius_;
  } else if (rho > 0.75 && p_norm >= 0.99 * radius_) {
    radius_ = std::min(tr.grow * radius_, tr.max_radius);
  }

  if (rho > tr.eta_accept) {
    out.status = StepStatus::Accepted;
    out.u = std::move(trial);
    out.f = std::move(t.f);
    out.norm = t.norm;
  } else {
    out.status = StepStatus::Rejected;
    out.u = u;
    out.f = f;
    out.norm = f_norm;
  }
  return out;
}

SolveResult newton_solve_with_solution(const NonlinearSystem& system, const Vec& u0, InnerSolver inner,
                                       const SolveOptions& opts, std::vector<Vec>* iterates) {
  validate(opts);
  const auto start = std::chrono::steady_clock::now();
  SolveResult res;
  SolveReport& rep = res.report;
  res.solution = u0;
  if (iterates) iterates->push_back(u0);

  TrialEval t0 = evaluate(system, u0);
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
    StepResult s = inner == InnerSolver::LineSearch ? line_search_step(system, u, f, f_norm, opts)
                                                    : tr.step(system, u, f, f_norm);
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
    if (iterates) iterates->push_back(u);
    rep.history.push_back({rep.iterations, f_norm, r0 > 0.0 ? f_norm / r0 : 0.0, s.step, false});
  }
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

SolveReport newton_solve(const NonlinearSystem& system, const Vec& u0, InnerSolver inner,
                         const SolveOptions& opts) {
  return newton_solve_with_solution(system, u0, inner, opts).report;
}

SolveReport newton_ls(const NonlinearSystem& system, const Vec& u0, const SolveOptions& opts) {
  return newton_solve(system, u0, InnerSolver::LineSearch, opts);
}

SolveReport newton_tr(const NonlinearSystem& system, const Vec& u0, const SolveOptions& opts) {
  return newton_solve(system, u0, InnerSolver::TrustRegion, opts);
}

std::string to_string(InnerSolver inner) {
  return inner == InnerSolver::LineSearch ? "LS" : "TR";
}

}  // namespace fpno
