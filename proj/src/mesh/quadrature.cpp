#include "fpno/mesh/quadrature.hpp"

#include <cmath>

#include "fpno/errors.hpp"

namespace fpno {

const std::vector<QuadPoint>& element_quadrature(ElemKind kind) {
  static const std::vector<QuadPoint> tri = {
      {{1.0 / 6.0, 1.0 / 6.0}, 1.0 / 6.0},
      {{2.0 / 3.0, 1.0 / 6.0}, 1.0 / 6.0},
      {{1.0 / 6.0, 2.0 / 3.0}, 1.0 / 6.0},
  };
  static const std::vector<QuadPoint> quad = [] {
    const double g = 1.0 / std::sqrt(3.0);
    return std::vector<QuadPoint>{
        {{-g, -g}, 1.0}, {{g, -g}, 1.0}, {{g, g}, 1.0}, {{-g, g}, 1.0}};
  }();
  return kind == ElemKind::P1Tri ? tri : quad;
}

ShapeEval shape_functions(ElemKind kind, Point2 ref) {
  ShapeEval s;
  const double xi = ref.x, eta = ref.y;
  if (kind == ElemKind::P1Tri) {
    s.phi = {1.0 - xi - eta, xi, eta, 0.0};
    s.dphi[0] = {-1.0, -1.0};
    s.dphi[1] = {1.0, 0.0};
    s.dphi[2] = {0.0, 1.0};
    return s;
  }
  // Counterclockwise corners (-1,-1), (1,-1), (1,1), (-1,1).
  constexpr double sx[4] = {-1.0, 1.0, 1.0, -1.0};
  constexpr double sy[4] = {-1.0, -1.0, 1.0, 1.0};
  for (int a = 0; a < 4; ++a) {
    s.phi[a] = 0.25 * (1.0 + sx[a] * xi) * (1.0 + sy[a] * eta);
    s.dphi[a] = {0.25 * sx[a] * (1.0 + sy[a] * eta), 0.25 * sy[a] * (1.0 + sx[a] * xi)};
  }
  return s;
}

std::vector<ElementGeometry> element_geometry(const Mesh& mesh, std::size_t elem) {
  const auto& conn = mesh.elements()[elem];
  const int npe = mesh.nodes_per_element();
  const auto& rule = element_quadrature(mesh.kind());
  std::vector<ElementGeometry> out(rule.size());
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const ShapeEval s = shape_functions(mesh.kind(), rule[q].ref);
    double j00 = 0, j01 = 0, j10 = 0, j11 = 0;  // d(x,y)/d(xi,eta)
    double px = 0, py = 0;
    for (int a = 0; a < npe; ++a) {
      const Point2 p = mesh.nodes()[conn[a]];
      j00 += p.x * s.dphi[a][0];
      j01 += p.x * s.dphi[a][1];
      j10 += p.y * s.dphi[a][0];
      j11 += p.y * s.dphi[a][1];
      px += p.x * s.phi[a];
      py += p.y * s.phi[a];
    }
    const double det = j00 * j11 - j01 * j10;
    if (!(det > 0.0)) throw InvalidMesh("element_geometry: non-positive reference map determinant");
    auto& g = out[q];
    g.phi = s.phi;
    g.det_j = det;
    g.x = {px, py};
    for (int a = 0; a < npe; ++a) {
      // grad = J^{-T} dphi
      g.grad[a][0] = (j11 * s.dphi[a][0] - j10 * s.dphi[a][1]) / det;
      g.grad[a][1] = (-j01 * s.dphi[a][0] + j00 * s.dphi[a][1]) / det;
    }
  }
  return out;
}

}  // namespace fpno
