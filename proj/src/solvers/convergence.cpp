#include "fpno/solvers/convergence.hpp"

#include <cmath>

#include "fpno/errors.hpp"

namespace fpno {

void validate(const SolveOptions& opts) {
  if (!(opts.abs_tol > 0.0) || !(opts.rel_tol > 0.0) || !(opts.divergence_cap > 0.0)) {
    throw ConfigError("solver tolerances must be positive");
  }
  if (!(opts.tr.shrink < 1.0) || !(opts.tr.grow > 1.0)) {
    throw ConfigError("trust region needs shrink < 1 < grow");
  }
  if (opts.max_iters < 0 || opts.ls.max_backtracks < 0) throw ConfigError("iteration limits must be >= 0");
}

ConvergenceState check_convergence(double r_norm, double r0_norm, const SolveOptions& opts) {
  if (r0_norm == 0.0) return ConvergenceState::Converged;
  if (std::isnan(r_norm)) return ConvergenceState::Diverged;
  const double ratio = r_norm / r0_norm;
  if (r_norm <= opts.abs_tol || ratio <= opts.rel_tol) return ConvergenceState::Converged;
  if (ratio > opts.divergence_cap) return ConvergenceState::Diverged;
  return ConvergenceState::Continue;
}

}  // namespace fpno
