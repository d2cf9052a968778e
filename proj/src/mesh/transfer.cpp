#include "fpno/mesh/transfer.hpp"

#include <cmath>
#include <map>
#include <tuple>

#include "fpno/errors.hpp"

namespace fpno {
namespace {

Vec apply_componentwise(const CsrMatrix& m, const Vec& x, int components) {
  if (components < 1 || x.size() != m.cols() * components) {
    throw DimensionError("transfer: vector length does not match mesh node count");
  }
  if (components == 1) return m.multiply(x);
  Vec out = Vec::Zero(m.rows() * components);
  Vec slice(m.cols());
  for (int c = 0; c < components; ++c) {
    for (std::int64_t k = 0; k < m.cols(); ++k) slice[k] = x[k * components + c];
    const Vec y = m.multiply(slice);
    for (std::int64_t k = 0; k < m.rows(); ++k) out[k * components + c] = y[k];
  }
  return out;
}

// Key: (cell i, cell j, half) with half = 0 for quads / lower triangles.
using CellKey = std::tuple<int, int, int>;

std::map<CellKey, std::size_t> index_cells(const Mesh& mesh) {
  std::map<CellKey, std::size_t> cells;
  const auto& gi = mesh.grid_index();
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto& conn = mesh.elements()[e];
    const auto a = gi[conn[0]];
    int half = 0;
    if (mesh.kind() == ElemKind::P1Tri) {
      const auto b = gi[conn[1]];
      half = (b[1] == a[1]) ? 0 : 1;
    }
    cells.emplace(CellKey{a[0], a[1], half}, e);
  }
  return cells;
}

}  // namespace

Vec TransferOps::prolong(const Vec& coarse, int components) const {
  return apply_componentwise(prolongation, coarse, components);
}

Vec TransferOps::restrict_to_coarse(const Vec& fine, int components) const {
  return apply_componentwise(restriction, fine, components);
}

TransferOps build_transfer(const Mesh& coarse, const Mesh& fine) {
  const auto& cd = coarse.descriptor();
  const auto& fd = fine.descriptor();
  MeshDescriptor same_n = fd;
  same_n.n = cd.n;
  if (!(same_n == cd) || fd.n % cd.n != 0) {
    throw TransferError("build_transfer: meshes are not nested refinements of each other");
  }
  const int ratio = fd.n / cd.n;
  const auto cells = index_cells(coarse);

  std::vector<Triplet> p_trips;
  std::vector<Triplet> r_trips;
  for (std::size_t f = 0; f < fine.num_nodes(); ++f) {
    const auto [fi, fj] = fine.grid_index()[f];
    if (fi % ratio == 0 && fj % ratio == 0) {
      const std::int64_t c = coarse.node_at(fi / ratio, fj / ratio);
      if (c >= 0) {
        p_trips.push_back({static_cast<std::int64_t>(f), c, 1.0});
        continue;
      }
    }
    // Candidate coarse cells whose closure contains the fine node.
    bool found = false;
    for (int ci = fi / ratio - (fi % ratio == 0 ? 1 : 0); ci <= fi / ratio && !found; ++ci) {
      for (int cj = fj / ratio - (fj % ratio == 0 ? 1 : 0); cj <= fj / ratio && !found; ++cj) {
        if (ci < 0 || cj < 0 || ci >= cd.n || cj >= cd.n) continue;
        const double s = static_cast<double>(fi - ci * ratio) / ratio;
        const double t = static_cast<double>(fj - cj * ratio) / ratio;
        std::vector<std::pair<std::array<int, 2>, double>> weights;
        if (coarse.kind() == ElemKind::Q1Quad) {
          if (!cells.count({ci, cj, 0})) continue;
          weights = {{{ci, cj}, (1 - s) * (1 - t)},
                     {{ci + 1, cj}, s * (1 - t)},
                     {{ci + 1, cj + 1}, s * t},
                     {{ci, cj + 1}, (1 - s) * t}};
        } else if (t <= s && cells.count({ci, cj, 0})) {
          weights = {{{ci, cj}, 1 - s}, {{ci + 1, cj}, s - t}, {{ci + 1, cj + 1}, t}};
        } else if (t >= s && cells.count({ci, cj, 1})) {
          weights = {{{ci, cj}, 1 - t}, {{ci + 1, cj + 1}, s}, {{ci, cj + 1}, t - s}};
        } else {
          continue;
        }
        for (const auto& [pos, w] : weights) {
          if (w == 0.0) continue;
          const std::int64_t c = coarse.node_at(pos[0], pos[1]);
          if (c < 0) throw TransferError("build_transfer: interpolation node missing from coarse mesh");
          p_trips.push_back({static_cast<std::int64_t>(f), c, w});
        }
        found = true;
      }
    }
    if (!found) throw TransferError("build_transfer: fine node outside the coarse mesh");
  }

  for (std::size_t c = 0; c < coarse.num_nodes(); ++c) {
    const auto [ci, cj] = coarse.grid_index()[c];
    const std::int64_t f = fine.node_at(ci * ratio, cj * ratio);
    if (f < 0) throw TransferError("build_transfer: coarse node has no coincident fine node");
    r_trips.push_back({static_cast<std::int64_t>(c), f, 1.0});
  }

  const auto nc = static_cast<std::int64_t>(coarse.num_nodes());
  const auto nf = static_cast<std::int64_t>(fine.num_nodes());
  return TransferOps{CsrMatrix::from_triplets(p_trips, nf, nc), CsrMatrix::from_triplets(r_trips, nc, nf)};
}

}  // namespace fpno
