#pragma once

#include "fpno/solvers/options.hpp"

namespace fpno {

enum class ConvergenceState { Continue, Converged, Diverged };

/// Converged iff r <= abs_tol or r / r0 <= rel_tol; diverged iff
/// r / r0 > divergence_cap. A zero initial residual counts as converged.
ConvergenceState check_convergence(double r_norm, double r0_norm, const SolveOptions& opts);

}  // namespace fpno
