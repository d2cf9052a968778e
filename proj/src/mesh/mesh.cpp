#include "fpno/mesh/mesh.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "fpno/errors.hpp"

namespace fpno {

bool EllipseHole::contains(Point2 p) const {
  const double dx = (p.x - center.x) / semi_x;
  const double dy = (p.y - center.y) / semi_y;
  return dx * dx + dy * dy < 1.0;
}

bool MeshDescriptor::operator==(const MeshDescriptor& other) const {
  if (n != other.n || kind != other.kind || convention != other.convention) return false;
  if (hole.has_value() != other.hole.has_value()) return false;
  if (!hole) return true;
  return mask_level() == other.mask_level() && hole->center.x == other.hole->center.x && hole->center.y == other.hole->center.y &&
         hole->semi_x == other.hole->semi_x && hole->semi_y == other.hole->semi_y;
}

TagConvention default_convention(ElemKind kind) {
  return kind == ElemKind::P1Tri ? TagConvention::Poisson : TagConvention::Elasticity;
}

std::int64_t Mesh::node_at(int i, int j) const {
  const int n = desc_.n;
  if (i < 0 || j < 0 || i > n || j > n) return -1;
  return grid_to_node_[static_cast<std::size_t>(j) * (n + 1) + i];
}

std::map<BoundaryTag, std::size_t> Mesh::tag_histogram() const {
  std::map<BoundaryTag, std::size_t> hist;
  for (BoundaryTag t : tags_) ++hist[t];
  return hist;
}

Mesh build_unit_square_mesh(int n, ElemKind kind, std::optional<EllipseHole> hole) {
  return build_unit_square_mesh(MeshDescriptor{n, kind, default_convention(kind), hole});
}

Mesh build_unit_square_mesh(const MeshDescriptor& desc) {
  const int n = desc.n;
  if (n < 2) throw InvalidMesh("build_unit_square_mesh: need n >= 2, got " + std::to_string(n));
  if (desc.hole) {
    const auto& h = *desc.hole;
    if (!(h.semi_x > 0.0 && h.semi_y > 0.0) || h.center.x - h.semi_x <= 0.0 ||
        h.center.x + h.semi_x >= 1.0 || h.center.y - h.semi_y <= 0.0 || h.center.y + h.semi_y >= 1.0) {
      throw InvalidMesh("build_unit_square_mesh: ellipse must lie inside the unit square");
    }
    if (desc.mask_n < 0 || (desc.mask_n > 0 && n % desc.mask_n != 0)) {
      throw InvalidMesh("build_unit_square_mesh: mask grid must divide the mesh grid");
    }
  }

  const double h = 1.0 / n;
  const int m = desc.mask_level();
  const double hm = 1.0 / m;
  // Whether the element with centroid p is removed: find the mask-grid
  // element containing p and test that element's centroid.
  const auto masked = [&](Point2 p) {
    if (!desc.hole) return false;
    const int ci = std::min(m - 1, static_cast<int>(p.x * m));
    const int cj = std::min(m - 1, static_cast<int>(p.y * m));
    if (desc.kind == ElemKind::Q1Quad) return desc.hole->contains({(ci + 0.5) * hm, (cj + 0.5) * hm});
    const bool lower = p.x - ci * hm > p.y - cj * hm;
    return desc.hole->contains(lower ? Point2{(3 * ci + 2) * hm / 3.0, (3 * cj + 1) * hm / 3.0}
                                     : Point2{(3 * ci + 1) * hm / 3.0, (3 * cj + 2) * hm / 3.0});
  };
  const auto grid_id = [n](int i, int j) { return static_cast<std::int64_t>(j) * (n + 1) + i; };

  // Elements in grid numbering; cells ordered row by row.
  std::vector<std::array<std::int64_t, 4>> cells;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::int64_t a = grid_id(i, j), b = grid_id(i + 1, j), c = grid_id(i + 1, j + 1),
                         d = grid_id(i, j + 1);
      if (desc.kind == ElemKind::Q1Quad) {
        const Point2 centroid{(i + 0.5) * h, (j + 0.5) * h};
        if (masked(centroid)) continue;
        cells.push_back({a, b, c, d});
      } else {
        const Point2 c1{(3 * i + 2) * h / 3.0, (3 * j + 1) * h / 3.0};
        const Point2 c2{(3 * i + 1) * h / 3.0, (3 * j + 2) * h / 3.0};
        if (!masked(c1)) cells.push_back({a, b, c, -1});
        if (!masked(c2)) cells.push_back({a, c, d, -1});
      }
    }
  }
  if (cells.empty()) throw InvalidMesh("build_unit_square_mesh: hole removes every element");

  const std::size_t grid_nodes = static_cast<std::size_t>(n + 1) * (n + 1);
  const int npe = desc.kind == ElemKind::P1Tri ? 3 : 4;
  std::vector<int> use_count(grid_nodes, 0);
  for (const auto& c : cells) {
    for (int k = 0; k < npe; ++k) ++use_count[c[k]];
  }

  Mesh mesh;
  mesh.desc_ = desc;
  mesh.grid_to_node_.assign(grid_nodes, -1);
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      const auto g = grid_id(i, j);
      if (use_count[g] == 0) continue;
      mesh.grid_to_node_[g] = static_cast<std::int64_t>(mesh.nodes_.size());
      mesh.nodes_.push_back({i * h, j * h});
      mesh.grid_index_.push_back({i, j});
    }
  }
  for (auto c : cells) {
    for (int k = 0; k < npe; ++k) c[k] = mesh.grid_to_node_[c[k]];
    mesh.elements_.push_back(c);
  }

  // Boundary nodes are those on edges owned by exactly one element.
  std::map<std::pair<std::int64_t, std::int64_t>, int> edge_count;
  for (const auto& e : mesh.elements_) {
    for (int k = 0; k < npe; ++k) {
      const auto a = e[k], b = e[(k + 1) % npe];
      ++edge_count[{std::min(a, b), std::max(a, b)}];
    }
  }
  std::vector<bool> on_boundary(mesh.nodes_.size(), false);
  for (const auto& [edge, count] : edge_count) {
    if (count == 1) on_boundary[edge.first] = on_boundary[edge.second] = true;
  }

  mesh.tags_.resize(mesh.nodes_.size(), BoundaryTag::Interior);
  for (std::size_t k = 0; k < mesh.nodes_.size(); ++k) {
    const auto [i, j] = mesh.grid_index_[k];
    const bool on_square = i == 0 || j == 0 || i == n || j == n;
    if (!on_boundary[k]) continue;
    BoundaryTag tag = BoundaryTag::GammaOther;
    if (desc.convention == TagConvention::Poisson) {
      tag = (i == n) ? BoundaryTag::GammaDirichlet : BoundaryTag::GammaNeumann;
      if (!on_square) tag = BoundaryTag::GammaOther;
    } else {
      if (j == 0) {
        tag = BoundaryTag::GammaBottom;
      } else if (j == n) {
        tag = BoundaryTag::GammaTop;
      }
    }
    mesh.tags_[k] = tag;
  }
  return mesh;
}

std::string to_string(ElemKind kind) { return kind == ElemKind::P1Tri ? "P1_TRI" : "Q1_QUAD"; }

std::string to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::GammaDirichlet: return "GAMMA_DIRICHLET";
    case BoundaryTag::GammaNeumann: return "GAMMA_NEUMANN";
    case BoundaryTag::Interior: return "INTERIOR";
    case BoundaryTag::GammaBottom: return "GAMMA_BOTTOM";
    case BoundaryTag::GammaTop: return "GAMMA_TOP";
    case BoundaryTag::GammaOther: return "GAMMA_OTHER";
  }
  return "UNKNOWN";
}

ElemKind parse_elem_kind(const std::string& s) {
  if (s == "P1_TRI" || s == "tri" || s == "p1") return ElemKind::P1Tri;
  if (s == "Q1_QUAD" || s == "quad" || s == "q1") return ElemKind::Q1Quad;
  throw Unsupported("unknown element kind '" + s + "'");
}

std::string mesh_summary(const Mesh& mesh) {
  std::ostringstream os;
  os << "kind: " << to_string(mesh.kind()) << "\n";
  os << "subdivisions: " << mesh.subdivisions() << "\n";
  os << "nodes: " << mesh.num_nodes() << "\n";
  os << "elements: " << mesh.num_elements() << "\n";
  for (const auto& [tag, count] : mesh.tag_histogram()) {
    os << "tag " << to_string(tag) << ": " << count << "\n";
  }
  return os.str();
}

}  // namespace fpno
