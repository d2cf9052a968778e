#include "fpno/problems/poisson.hpp"

#include "fpno/errors.hpp"

namespace fpno {

PoissonProblem::PoissonProblem(std::shared_ptr<const Mesh> mesh, PoissonParams params)
    : NonlinearProblem(mesh, boundary_dofs(*mesh, ProblemKind::NonlinearPoisson)),
      params_(std::move(params)) {
  if (params_.forcing.size() != static_cast<Eigen::Index>(mesh_->num_nodes())) {
    throw DimensionError("PoissonProblem: forcing must have one value per mesh node");
  }
}

Vec PoissonProblem::residual(const Vec& u_free) const {
  check_size(u_free, "poisson_residual");
  const Vec u = dofmap_.expand(u_free);
  const auto& f = params_.forcing;
  Vec r = Vec::Zero(size());
  for (std::size_t e = 0; e < mesh_->num_elements(); ++e) {
    const auto& conn = mesh_->elements()[e];
    const auto& rule = element_quadrature(ElemKind::P1Tri);
    const auto& geo = geometry(e);
    double local[3] = {0.0, 0.0, 0.0};
    for (std::size_t q = 0; q < geo.size(); ++q) {
      const auto& g = geo[q];
      double uq = 0.0, fq = 0.0, gx = 0.0, gy = 0.0;
      for (int a = 0; a < 3; ++a) {
        uq += g.phi[a] * u[conn[a]];
        fq += g.phi[a] * f[conn[a]];
        gx += g.grad[a][0] * u[conn[a]];
        gy += g.grad[a][1] * u[conn[a]];
      }
      const double w = rule[q].weight * g.det_j;
      const double qu = params_.q(uq);
      for (int a = 0; a < 3; ++a) {
        local[a] += w * (qu * (gx * g.grad[a][0] + gy * g.grad[a][1]) - fq * g.phi[a]);
      }
    }
    for (int a = 0; a < 3; ++a) {
      const std::int64_t i = dofmap_.free_index(conn[a]);
      if (i >= 0) r[i] += local[a];
    }
  }
  return r;
}

CsrMatrix PoissonProblem::jacobian(const Vec& u_free) const {
  check_size(u_free, "poisson_jacobian");
  const Vec u = dofmap_.expand(u_free);
  std::vector<Triplet> trips;
  trips.reserve(mesh_->num_elements() * 9);
  for (std::size_t e = 0; e < mesh_->num_elements(); ++e) {
    const auto& conn = mesh_->elements()[e];
    const auto& rule = element_quadrature(ElemKind::P1Tri);
    const auto& geo = geometry(e);
    double local[3][3] = {};
    for (std::size_t q = 0; q < geo.size(); ++q) {
      const auto& g = geo[q];
      double uq = 0.0, gx = 0.0, gy = 0.0;
      for (int a = 0; a < 3; ++a) {
        uq += g.phi[a] * u[conn[a]];
        gx += g.grad[a][0] * u[conn[a]];
        gy += g.grad[a][1] * u[conn[a]];
      }
      const double w = rule[q].weight * g.det_j;
      const double qu = params_.q(uq);
      const double dqu = params_.dq(uq);
      for (int a = 0; a < 3; ++a) {
        const double gu_ga = gx * g.grad[a][0] + gy * g.grad[a][1];
        for (int b = 0; b < 3; ++b) {
          const double gb_ga = g.grad[b][0] * g.grad[a][0] + g.grad[b][1] * g.grad[a][1];
          local[a][b] += w * (qu * gb_ga + dqu * g.phi[b] * gu_ga);
        }
      }
    }
    for (int a = 0; a < 3; ++a) {
      const std::int64_t i = dofmap_.free_index(conn[a]);
      if (i < 0) continue;
      for (int b = 0; b < 3; ++b) {
        const std::int64_t j = dofmap_.free_index(conn[b]);
        if (j >= 0) trips.push_back({i, j, local[a][b]});
      }
    }
  }
  return CsrMatrix::from_triplets(trips, size(), size());
}

}  // namespace fpno
