#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fpno/grf/grf.hpp"
#include "fpno/mesh/dofmap.hpp"
#include "fpno/mesh/mesh.hpp"
#include "fpno/solvers/newton.hpp"

namespace fpno {

/// All Newton iterates of one solve from one initial guess, with the
/// converged solution. Vectors are full dof vectors on the training mesh.
struct SnapshotGroup {
  std::uint64_t seed = 0;
  Vec zeta;
  std::vector<Vec> iterates;  // u^(0), ..., u^(m_j)
  Vec reference;              // u^*

  bool operator==(const SnapshotGroup&) const = default;
};

struct Dataset {
  ProblemKind problem = ProblemKind::NonlinearPoisson;
  MeshDescriptor mesh;
  std::vector<SnapshotGroup> groups;
  std::vector<std::size_t> train_groups;
  std::vector<std::size_t> validation_groups;
  std::size_t discarded = 0;

  std::size_t num_snapshots() const;
  std::size_t num_snapshots(const std::vector<std::size_t>& group_ids) const;

  bool operator==(const Dataset&) const = default;
};

struct DataGenConfig {
  ProblemKind problem = ProblemKind::NonlinearPoisson;
  MeshDescriptor mesh;
  int num_guesses = 200;
  std::uint64_t seed = 0;
  GrfSpec forcing{0.0, 0.1, 0.1, 1e-10};  // Poisson parameter field
  GrfSpec guess{0.0, 1.0, 0.1, 1e-10};    // shape of the initial guesses before rescaling
  double guess_lo = 1e-4;
  double guess_hi = 1e-2;
  double top_lo = 0.0;  // elasticity: u_t ~ U(top_lo, top_hi)
  double top_hi = 2.0;
  double validation_fraction = 0.1;
  InnerSolver solver = InnerSolver::LineSearch;
  SolveOptions opts;
};

/// Independent per-(seed, index, stream) 64-bit seeds (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index, std::uint64_t stream);

/// Samples parameters and initial guesses, runs the configured Newton
/// solver and keeps every iterate of each converged run. Non-converged
/// groups are discarded (and reported through `log`); more than half
/// discarded raises DataGenFailure. The result is split by group.
Dataset generate_dataset(const DataGenConfig& cfg, const std::function<void(const std::string&)>& log = {});

/// Group-disjoint split: a seeded shuffle of the groups, the first
/// round(fraction * groups) (at least one when there are two or more
/// groups) go to validation.
void split_groups(Dataset& data, double validation_fraction, std::uint64_t seed);

void save_dataset(const std::string& path, const Dataset& data);
Dataset load_dataset(const std::string& path);

}  // namespace fpno
