#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fpno {

enum class ElemKind { P1Tri, Q1Quad };

enum class BoundaryTag { GammaDirichlet, GammaNeumann, Interior, GammaBottom, GammaTop, GammaOther };

/// Which boundary naming the builder applies: the Poisson convention marks
/// x = 1 as Dirichlet and the rest of the boundary as Neumann; the
/// elasticity convention marks bottom / top / other.
enum class TagConvention { Poisson, Elasticity };

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Axis-aligned ellipse removed from the unit square.
struct EllipseHole {
  Point2 center{0.5, 0.5};
  double semi_x = 0.3;
  double semi_y = 0.25;

  bool contains(Point2 p) const;
};

/// Everything needed to rebuild a mesh deterministically. Stored alongside
/// trained models and datasets.
struct MeshDescriptor {
  int n = 0;
  ElemKind kind = ElemKind::P1Tri;
  TagConvention convention = TagConvention::Poisson;
  std::optional<EllipseHole> hole;
  // Grid on which the hole mask is evaluated (0: the mesh's own grid). A
  // refinement of an n-grid sets this to n so that both meshes cover
  // exactly the same domain.
  int mask_n = 0;

  int mask_level() const { return mask_n > 0 ? mask_n : n; }
  bool operator==(const MeshDescriptor& other) const;
};

/// Structured 2D mesh of the unit square. Immutable after construction.
class Mesh {
 public:
  const MeshDescriptor& descriptor() const { return desc_; }
  ElemKind kind() const { return desc_.kind; }
  int subdivisions() const { return desc_.n; }
  int nodes_per_element() const { return desc_.kind == ElemKind::P1Tri ? 3 : 4; }

  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_elements() const { return elements_.size(); }

  const std::vector<Point2>& nodes() const { return nodes_; }
  const std::vector<std::array<std::int64_t, 4>>& elements() const { return elements_; }
  const std::vector<BoundaryTag>& tags() const { return tags_; }

  /// Grid index (i, j) of each retained node; position = (i/n, j/n).
  const std::vector<std::array<int, 2>>& grid_index() const { return grid_index_; }
  /// Node id at grid position (i, j), or -1 when masked out.
  std::int64_t node_at(int i, int j) const;

  std::map<BoundaryTag, std::size_t> tag_histogram() const;

 private:
  friend Mesh build_unit_square_mesh(const MeshDescriptor& desc);

  MeshDescriptor desc_;
  std::vector<Point2> nodes_;
  std::vector<std::array<std::int64_t, 4>> elements_;  // triangles use the first three slots
  std::vector<BoundaryTag> tags_;
  std::vector<std::array<int, 2>> grid_index_;
  std::vector<std::int64_t> grid_to_node_;
};

/// Structured n x n grid over (0,1)^2. Triangles split each cell along the
/// lower-left to upper-right diagonal; element orientation is
/// counterclockwise. With a hole, an element is dropped when the centroid of
/// the element containing it on the mask grid lies inside the ellipse;
/// orphaned nodes are dropped too.
Mesh build_unit_square_mesh(const MeshDescriptor& desc);
Mesh build_unit_square_mesh(int n, ElemKind kind, std::optional<EllipseHole> hole = std::nullopt);

TagConvention default_convention(ElemKind kind);

std::string to_string(ElemKind kind);
std::string to_string(BoundaryTag tag);
ElemKind parse_elem_kind(const std::string& s);

/// Text summary used by the `mesh-info` command.
std::string mesh_summary(const Mesh& mesh);

}  // namespace fpno
