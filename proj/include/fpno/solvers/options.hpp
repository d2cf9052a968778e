#pragma once

namespace fpno {

struct LineSearchOptions {
  double armijo_c1 = 1e-4;
  double lambda_min = 1e-12;
  int max_backtracks = 40;
};

struct TrustRegionOptions {
  double initial_radius = 1.0;
  double max_radius = 1e3;
  double eta_accept = 1e-4;
  double shrink = 0.25;
  double grow = 2.0;
  // Consecutive singular Jacobians tolerated (Cauchy fallback) before giving up.
  int max_singular_fallbacks = 5;
};

struct SolveOptions {
  double abs_tol = 1e-15;
  double rel_tol = 1e-9;
  int max_iters = 200;
  double divergence_cap = 1e4;
  LineSearchOptions ls;
  TrustRegionOptions tr;
  // Apply the neural preconditioner unconditionally (no residual-increase guard).
  bool strict_paper = false;
};

/// Throws ConfigError when tolerances are not positive or shrink/grow are
/// not on either side of 1.
void validate(const SolveOptions& opts);

}  // namespace fpno
