#pragma once

#include <array>
#include <vector>

#include "fpno/mesh/mesh.hpp"

namespace fpno {

struct QuadPoint {
  Point2 ref;
  double weight;
};

/// Reference-element rule: degree-2 three-point rule on the triangle
/// {(0,0),(1,0),(0,1)}, 2x2 Gauss on [-1,1]^2.
const std::vector<QuadPoint>& element_quadrature(ElemKind kind);

/// Nodal shape functions and their reference gradients at a point.
struct ShapeEval {
  std::array<double, 4> phi{};
  std::array<std::array<double, 2>, 4> dphi{};  // d/dxi, d/deta
};

ShapeEval shape_functions(ElemKind kind, Point2 ref);

/// Physical-space shape gradients at one quadrature point.
struct ElementGeometry {
  std::array<double, 4> phi{};
  std::array<std::array<double, 2>, 4> grad{};  // d/dx, d/dy
  double det_j = 0.0;                           // reference map determinant
  Point2 x;                                     // physical position
};

/// Evaluates shape values, physical gradients and the map determinant of
/// element `elem` of `mesh` at every quadrature point.
std::vector<ElementGeometry> element_geometry(const Mesh& mesh, std::size_t elem);

}  // namespace fpno
