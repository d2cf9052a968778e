#include "fpno/mesh/dofmap.hpp"

#include <algorithm>
#include <numeric>

#include "fpno/errors.hpp"

namespace fpno {

DofMap::DofMap(std::size_t num_nodes, int components, std::vector<std::int64_t> constrained,
               std::vector<double> prescribed)
    : components_(components),
      num_dofs_(static_cast<std::int64_t>(num_nodes) * components),
      constrained_(std::move(constrained)),
      prescribed_(std::move(prescribed)) {
  if (constrained_.size() != prescribed_.size()) {
    throw DimensionError("DofMap: one prescribed value per constrained dof required");
  }
  std::vector<std::size_t> order(constrained_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return constrained_[a] < constrained_[b]; });
  std::vector<std::int64_t> sorted_dofs;
  std::vector<double> sorted_vals;
  for (std::size_t k : order) {
    sorted_dofs.push_back(constrained_[k]);
    sorted_vals.push_back(prescribed_[k]);
  }
  constrained_ = std::move(sorted_dofs);
  prescribed_ = std::move(sorted_vals);

  free_index_.assign(num_dofs_, 0);
  for (std::int64_t d : constrained_) {
    if (d < 0 || d >= num_dofs_) throw IndexError("DofMap: constrained dof out of range");
    if (free_index_[d] == -1) throw DimensionError("DofMap: dof constrained twice");
    free_index_[d] = -1;
  }
  for (std::int64_t d = 0; d < num_dofs_; ++d) {
    if (free_index_[d] == -1) continue;
    free_index_[d] = static_cast<std::int64_t>(free_.size());
    free_.push_back(d);
  }
}

Vec DofMap::expand(const Vec& u_free) const {
  Vec full = expand_zero(u_free);
  apply_prescribed(full);
  return full;
}

Vec DofMap::expand_zero(const Vec& u_free) const {
  if (u_free.size() != num_free()) throw DimensionError("DofMap::expand: free vector length mismatch");
  Vec full = Vec::Zero(num_dofs_);
  for (std::size_t k = 0; k < free_.size(); ++k) full[free_[k]] = u_free[k];
  return full;
}

Vec DofMap::restrict_free(const Vec& u_full) const {
  if (u_full.size() != num_dofs_) throw DimensionError("DofMap::restrict_free: length mismatch");
  Vec u(num_free());
  for (std::size_t k = 0; k < free_.size(); ++k) u[k] = u_full[free_[k]];
  return u;
}

void DofMap::apply_prescribed(Vec& u_full) const {
  if (u_full.size() != num_dofs_) throw DimensionError("DofMap::apply_prescribed: length mismatch");
  for (std::size_t k = 0; k < constrained_.size(); ++k) u_full[constrained_[k]] = prescribed_[k];
}

DofMap DofMap::with_prescribed(std::vector<double> prescribed) const {
  return DofMap(static_cast<std::size_t>(num_dofs_ / components_), components_, constrained_,
                std::move(prescribed));
}

DofMap boundary_dofs(const Mesh& mesh, ProblemKind kind, double top_displacement) {
  std::vector<std::int64_t> dofs;
  std::vector<double> values;
  const auto& tags = mesh.tags();
  switch (kind) {
    case ProblemKind::NonlinearPoisson: {
      const int n = mesh.subdivisions();
      for (std::size_t k = 0; k < mesh.num_nodes(); ++k) {
        if (mesh.grid_index()[k][0] == n) {
          dofs.push_back(static_cast<std::int64_t>(k));
          values.push_back(1.0);
        }
      }
      return DofMap(mesh.num_nodes(), 1, std::move(dofs), std::move(values));
    }
    case ProblemKind::NeoHookean: {
      const int n = mesh.subdivisions();
      for (std::size_t k = 0; k < mesh.num_nodes(); ++k) {
        const int j = mesh.grid_index()[k][1];
        if (j != 0 && j != n) continue;
        if (tags[k] == BoundaryTag::Interior) continue;
        const auto base = static_cast<std::int64_t>(2 * k);
        dofs.push_back(base);
        values.push_back(0.0);
        dofs.push_back(base + 1);
        values.push_back(j == n ? top_displacement : 0.0);
      }
      return DofMap(mesh.num_nodes(), 2, std::move(dofs), std::move(values));
    }
  }
  throw Unsupported("boundary_dofs: unknown problem kind");
}

std::string to_string(ProblemKind kind) {
  return kind == ProblemKind::NonlinearPoisson ? "poisson" : "neo_hookean";
}

ProblemKind parse_problem_kind(const std::string& s) {
  if (s == "poisson" || s == "np" || s == "NP") return ProblemKind::NonlinearPoisson;
  if (s == "neo_hookean" || s == "he" || s == "HE") return ProblemKind::NeoHookean;
  throw Unsupported("unknown problem kind '" + s + "'");
}

}  // namespace fpno
