#include "fpno/problems/problem.hpp"

#include <string>

#include "fpno/errors.hpp"

namespace fpno {

NonlinearProblem::NonlinearProblem(std::shared_ptr<const Mesh> mesh, DofMap dofmap)
    : mesh_(std::move(mesh)), dofmap_(std::move(dofmap)) {
  geometry_.reserve(mesh_->num_elements());
  for (std::size_t e = 0; e < mesh_->num_elements(); ++e) geometry_.push_back(element_geometry(*mesh_, e));
}

void NonlinearProblem::check_size(const Vec& u, const char* op) const {
  if (u.size() != size()) {
    throw DimensionError(std::string(op) + ": expected " + std::to_string(size()) + " free dofs, got " +
                         std::to_string(u.size()));
  }
}

}  // namespace fpno
