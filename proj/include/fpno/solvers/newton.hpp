#pragma once

#include <optional>

#include "fpno/linalg/csr_matrix.hpp"
#include "fpno/linalg/vector_ops.hpp"
#include "fpno/problems/problem.hpp"
#include "fpno/solvers/options.hpp"
#include "fpno/solvers/report.hpp"

namespace fpno {

enum class InnerSolver { LineSearch, TrustRegion };

/// Result of evaluating F at a trial point; `inverted` marks an
/// ElementInversion raised during the evaluation.
struct TrialEval {
  Vec f;
  double norm = 0.0;
  bool inverted = false;
};

TrialEval evaluate(const NonlinearSystem& system, const Vec& u);

enum class StepStatus {
  Accepted,      // sufficient decrease (LS) or rho > eta_accept (TR)
  Rejected,      // TR only: iterate unchanged, radius shrunk
  Stagnated,     // LS hit lambda_min and took the tiny step anyway
  Inverted,      // the forced lambda_min step inverted an element
  LinearFailed,  // singular Jacobian (LS), or persistent failure (TR)
};

struct StepResult {
  StepStatus status = StepStatus::Accepted;
  Vec u;
  Vec f;
  double norm = 0.0;
  double step = 0.0;  // lambda or trust radius used
};

/// One damped Newton step with Dennis-Schnabel backtracking on the merit
/// 1/2 |F|^2: full step first, then a quadratic fit, then cubic fits, each
/// new lambda kept within [0.1, 0.5] of the previous one.
StepResult line_search_step(const NonlinearSystem& system, const Vec& u, const Vec& f, double f_norm,
                            const SolveOptions& opts);

/// Dogleg trust-region stepper on the Gauss-Newton model of 1/2 |F|^2.
/// Keeps the radius (and the factorization across rejected attempts).
class TrustRegionStepper {
 public:
  explicit TrustRegionStepper(const SolveOptions& opts);

  StepResult step(const NonlinearSystem& system, const Vec& u, const Vec& f, double f_norm);
  double radius() const { return radius_; }

 private:
  struct Linearization {
    Vec u;
    CsrMatrix jac;
    std::optional<Vec> newton_step;
  };

  const SolveOptions opts_;
  double radius_;
  int singular_streak_ = 0;
  std::optional<Linearization> cache_;
};

SolveReport newton_ls(const NonlinearSystem& system, const Vec& u0, const SolveOptions& opts);
SolveReport newton_tr(const NonlinearSystem& system, const Vec& u0, const SolveOptions& opts);
SolveReport newton_solve(const NonlinearSystem& system, const Vec& u0, InnerSolver inner,
                         const SolveOptions& opts);

struct SolveResult {
  SolveReport report;
  Vec solution;  // last iterate
};

/// Same as newton_solve, also returning the final iterate. When `iterates`
/// is given, every accepted iterate (starting with u0) is appended to it.
SolveResult newton_solve_with_solution(const NonlinearSystem& system, const Vec& u0, InnerSolver inner,
                                       const SolveOptions& opts, std::vector<Vec>* iterates = nullptr);

std::string to_string(InnerSolver inner);

}  // namespace fpno
