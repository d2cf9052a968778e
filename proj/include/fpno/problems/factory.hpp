#pragma once

#include <memory>

#include "fpno/problems/neo_hookean.hpp"
#include "fpno/problems/poisson.hpp"

namespace fpno {

/// Problem instance from its parameter vector: nodal forcing for Poisson,
/// [u_t] for elasticity (default material).
std::unique_ptr<NonlinearProblem> make_problem(ProblemKind kind, std::shared_ptr<const Mesh> mesh, const Vec& zeta);

}  // namespace fpno
