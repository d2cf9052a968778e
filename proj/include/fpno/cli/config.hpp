#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "fpno/grf/grf.hpp"
#include "fpno/mesh/dofmap.hpp"
#include "fpno/mesh/mesh.hpp"
#include "fpno/solvers/options.hpp"
#include "fpno/training/dataset.hpp"
#include "fpno/training/trainer.hpp"

namespace fpno {

/// Everything one experiment needs, read from an INI file (see configs/).
struct ExperimentConfig {
  ProblemKind problem = ProblemKind::NonlinearPoisson;
  MeshDescriptor train_mesh;
  int solve_n = 0;  // solve mesh: train_mesh refined to this n

  DataGenConfig data;  // mesh / problem / forcing copied from above
  std::size_t target_train_samples = 0;  // documented reference counts (0: none)
  std::size_t target_validation_samples = 0;

  int width = 64;
  int latent = 64;
  int depth = 3;
  int reduction = 4;
  std::uint64_t model_seed = 7;
  TrainConfig train;

  SolveOptions solve;
  std::string solve_case = "I";
  std::string method = "newton-ls";
  std::uint64_t solve_seed = 1000;
  double case3_sigma = 1.0;
  double small_displacement = 0.1;  // elasticity case I
  double large_displacement = 1.0;  // elasticity case II
  double load_step = 0.1;

  std::vector<std::string> bench_cases;
  std::vector<std::string> bench_methods;
  std::string bench_baseline = "newton-ls";

  std::string out_dir = "out";
  std::string dataset_file = "dataset.bin";
  std::string model_file = "model.bin";

  MeshDescriptor solve_mesh() const;
  std::string dataset_path() const;
  std::string model_path() const;
};

/// Throws ConfigError on unreadable files, unknown keys or bad values.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(std::istream& is);

}  // namespace fpno
