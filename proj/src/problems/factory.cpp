#include "fpno/problems/factory.hpp"

#include "fpno/errors.hpp"

namespace fpno {

std::unique_ptr<NonlinearProblem> make_problem(ProblemKind kind, std::shared_ptr<const Mesh> mesh, const Vec& zeta) {
  if (kind == ProblemKind::NonlinearPoisson) {
    PoissonParams p;
    p.forcing = zeta;
    return std::make_unique<PoissonProblem>(std::move(mesh), std::move(p));
  }
  if (zeta.size() != 1) throw DimensionError("elasticity parameter must be the scalar u_t");
  ElasticityParams p;
  p.top_displacement = zeta[0];
  return std::make_unique<NeoHookeanProblem>(std::move(mesh), p);
}

}  // namespace fpno
