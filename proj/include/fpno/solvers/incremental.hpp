#pragma once

#include <memory>

#include "fpno/problems/neo_hookean.hpp"
#include "fpno/solvers/newton.hpp"

namespace fpno {

/// Solves the elasticity problem at u_t = delta, 2 delta, ..., total, each
/// increment warm-started from the previous solution. The report
/// concatenates the per-increment histories (rel_res relative to each
/// increment's own initial residual) and sums the iteration counts. Any
/// failed increment ends the run as DIVERGED with the partial history.
///
/// Throws ConfigError unless total / delta is an integer within 1e-12.
SolveResult incremental_loading_with_solution(std::shared_ptr<const Mesh> mesh, const ElasticityParams& base,
                                              double total, double delta, InnerSolver inner,
                                              const SolveOptions& opts);

SolveReport incremental_loading(std::shared_ptr<const Mesh> mesh, const ElasticityParams& base, double total,
                                double delta, InnerSolver inner, const SolveOptions& opts);

}  // namespace fpno
