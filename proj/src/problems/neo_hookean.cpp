#include "fpno/problems/neo_hookean.hpp"

#include <cmath>
#include <string>

#include "fpno/errors.hpp"

namespace fpno {
namespace {

struct Kinematics {
  double f[2][2];     // deformation gradient (in-plane block)
  double finv[2][2];  // its inverse
  double det;
};

Kinematics kinematics(const ElementGeometry& g, const std::array<std::int64_t, 4>& conn, const Vec& u,
                      std::size_t elem) {
  Kinematics k{{{1.0, 0.0}, {0.0, 1.0}}, {}, 0.0};
  for (int a = 0; a < 4; ++a) {
    const double ux = u[2 * conn[a]];
    const double uy = u[2 * conn[a] + 1];
    for (int j = 0; j < 2; ++j) {
      k.f[0][j] += ux * g.grad[a][j];
      k.f[1][j] += uy * g.grad[a][j];
    }
  }
  k.det = k.f[0][0] * k.f[1][1] - k.f[0][1] * k.f[1][0];
  if (!(k.det > 0.0)) {
    throw ElementInversion("neo-Hookean: det F = " + std::to_string(k.det) + " in element " +
                           std::to_string(elem));
  }
  k.finv[0][0] = k.f[1][1] / k.det;
  k.finv[0][1] = -k.f[0][1] / k.det;
  k.finv[1][0] = -k.f[1][0] / k.det;
  k.finv[1][1] = k.f[0][0] / k.det;
  return k;
}

}  // namespace

NeoHookeanProblem::NeoHookeanProblem(std::shared_ptr<const Mesh> mesh, ElasticityParams params)
    : NonlinearProblem(mesh, boundary_dofs(*mesh, ProblemKind::NeoHookean, params.top_displacement)),
      params_(params) {
  if (mesh_->kind() != ElemKind::Q1Quad) throw Unsupported("NeoHookeanProblem: requires a Q1 mesh");
  if (!(params_.poisson_ratio < 0.5)) throw Unsupported("NeoHookeanProblem: Poisson ratio must be < 0.5");
}

double NeoHookeanProblem::energy(const Vec& u_free) const {
  check_size(u_free, "neo_hookean_energy");
  const Vec u = dofmap_.expand(u_free);
  const double mu = params_.mu();
  const double lam = params_.lame_lambda();
  const auto& rule = element_quadrature(ElemKind::Q1Quad);
  double total = 0.0;
  for (std::size_t e = 0; e < mesh_->num_elements(); ++e) {
    const auto& conn = mesh_->elements()[e];
    const auto& geo = geometry(e);
    for (std::size_t q = 0; q < geo.size(); ++q) {
      const Kinematics k = kinematics(geo[q], conn, u, e);
      const double ic = k.f[0][0] * k.f[0][0] + k.f[0][1] * k.f[0][1] + k.f[1][0] * k.f[1][0] +
                        k.f[1][1] * k.f[1][1] + 1.0;
      const double w = 0.5 * mu * (ic - 3.0) - mu * std::log(k.det) + 0.5 * lam * (k.det - 1.0) * (k.det - 1.0);
      total += rule[q].weight * geo[q].det_j * w;
    }
  }
  return total;
}

Vec NeoHookeanProblem::residual(const Vec& u_free) const {
  check_size(u_free, "neo_hookean_residual");
  const Vec u = dofmap_.expand(u_free);
  const double mu = params_.mu();
  const double lam = params_.lame_lambda();
  const auto& rule = element_quadrature(ElemKind::Q1Quad);
  Vec r = Vec::Zero(size());
  for (std::size_t e = 0; e < mesh_->num_elements(); ++e) {
    const auto& conn = mesh_->elements()[e];
    const auto& geo = geometry(e);
    double local[4][2] = {};
    for (std::size_t q = 0; q < geo.size(); ++q) {
      const auto& g = geo[q];
      const Kinematics k = kinematics(g, conn, u, e);
      const double c = lam * (k.det - 1.0) * k.det - mu;
      double p[2][2];
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) p[i][j] = mu * k.f[i][j] + c * k.finv[j][i];
      }
      const double w = rule[q].weight * g.det_j;
      for (int a = 0; a < 4; ++a) {
        for (int i = 0; i < 2; ++i) local[a][i] += w * (p[i][0] * g.grad[a][0] + p[i][1] * g.grad[a][1]);
      }
    }
    for (int a = 0; a < 4; ++a) {
      for (int i = 0; i < 2; ++i) {
        const std::int64_t row = dofmap_.free_index(2 * conn[a] + i);
        if (row >= 0) r[row] += local[a][i];
      }
    }
  }
  return r;
}

CsrMatrix NeoHookeanProblem::jacobian(const Vec& u_free) const {
  check_size(u_free, "neo_hookean_jacobian");
  const Vec u = dofmap_.expand(u_free);
  const double mu = params_.mu();
  const double lam = params_.lame_lambda();
  const auto& rule = element_quadrature(ElemKind::Q1Quad);
  std::vector<Triplet> trips;
  trips.reserve(mesh_->num_elements() * 64);
  for (std::size_t e = 0; e < mesh_->num_elements(); ++e) {
    const auto& conn = mesh_->elements()[e];
    const auto& geo = geometry(e);
    double local[8][8] = {};
    for (std::size_t q = 0; q < geo.size(); ++q) {
      const auto& g = geo[q];
      const Kinematics k = kinematics(g, conn, u, e);
      // dP_iJ/dF_kL = mu d_ik d_JL + (mu - lam (J-1) J) Finv_Jk Finv_Li
      //             + lam (2J - 1) J Finv_Ji Finv_Lk
      const double c1 = mu - lam * (k.det - 1.0) * k.det;
      const double c2 = lam * (2.0 * k.det - 1.0) * k.det;
      double tangent[2][2][2][2];
      for (int i = 0; i < 2; ++i)
        for (int jj = 0; jj < 2; ++jj)
          for (int kk = 0; kk < 2; ++kk)
            for (int l = 0; l < 2; ++l)
              tangent[i][jj][kk][l] = (i == kk && jj == l ? mu : 0.0) + c1 * k.finv[jj][kk] * k.finv[l][i] +
                                      c2 * k.finv[jj][i] * k.finv[l][kk];
      const double w = rule[q].weight * g.det_j;
      for (int a = 0; a < 4; ++a) {
        for (int i = 0; i < 2; ++i) {
          for (int b = 0; b < 4; ++b) {
            for (int kk = 0; kk < 2; ++kk) {
              double s = 0.0;
              for (int jj = 0; jj < 2; ++jj)
                for (int l = 0; l < 2; ++l) s += g.grad[a][jj] * tangent[i][jj][kk][l] * g.grad[b][l];
              local[2 * a + i][2 * b + kk] += w * s;
            }
          }
        }
      }
    }
    for (int a = 0; a < 8; ++a) {
      const std::int64_t row = dofmap_.free_index(2 * conn[a / 2] + a % 2);
      if (row < 0) continue;
      for (int b = 0; b < 8; ++b) {
        const std::int64_t col = dofmap_.free_index(2 * conn[b / 2] + b % 2);
        if (col >= 0) trips.push_back({row, col, local[a][b]});
      }
    }
  }
  return CsrMatrix::from_triplets(trips, size(), size());
}

}  // namespace fpno
