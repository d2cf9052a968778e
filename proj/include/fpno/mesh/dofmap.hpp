#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fpno/linalg/vector_ops.hpp"
#include "fpno/mesh/mesh.hpp"

namespace fpno {

enum class ProblemKind { NonlinearPoisson, NeoHookean };

/// Partition of the d * |nodes| dofs (interleaved: dof = node * d + comp)
/// into free and Dirichlet-constrained sets.
class DofMap {
 public:
  DofMap(std::size_t num_nodes, int components, std::vector<std::int64_t> constrained,
         std::vector<double> prescribed);

  int components() const { return components_; }
  std::int64_t num_dofs() const { return num_dofs_; }
  std::int64_t num_free() const { return static_cast<std::int64_t>(free_.size()); }

  const std::vector<std::int64_t>& free_dofs() const { return free_; }
  const std::vector<std::int64_t>& constrained_dofs() const { return constrained_; }
  const std::vector<double>& prescribed_values() const { return prescribed_; }

  /// Position of a dof in the free ordering, or -1 if constrained.
  std::int64_t free_index(std::int64_t dof) const { return free_index_[dof]; }

  /// Full vector with free entries from `u_free` and prescribed values elsewhere.
  Vec expand(const Vec& u_free) const;
  /// Full vector with free entries from `u_free` and zeros at constrained dofs.
  Vec expand_zero(const Vec& u_free) const;
  Vec restrict_free(const Vec& u_full) const;
  /// Overwrites constrained entries of a full vector with prescribed values.
  void apply_prescribed(Vec& u_full) const;

  /// Same partition with new prescribed values (incremental loading).
  DofMap with_prescribed(std::vector<double> prescribed) const;

 private:
  int components_;
  std::int64_t num_dofs_;
  std::vector<std::int64_t> free_;
  std::vector<std::int64_t> constrained_;
  std::vector<double> prescribed_;
  std::vector<std::int64_t> free_index_;
};

/// Boundary data of the two benchmark problems. `top_displacement` is u_t
/// (elasticity only).
DofMap boundary_dofs(const Mesh& mesh, ProblemKind kind, double top_displacement = 0.0);

std::string to_string(ProblemKind kind);
ProblemKind parse_problem_kind(const std::string& s);

}  // namespace fpno
