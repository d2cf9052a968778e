#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "fpno/cli/config.hpp"

namespace fpno {

enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitRuntime = 3 };

struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> solve_case;
  std::optional<std::string> method;
  bool strict_paper = false;
};

/// --seed goes to the seed the verb consumes: data seed (gen-data), model
/// and shuffle seeds (train), forcing seed (solve, bench).
void apply_overrides(ExperimentConfig& cfg, const CliOverrides& o, const std::string& verb);

int cmd_mesh_info(const ExperimentConfig& cfg, std::ostream& out);
int cmd_gen_data(const ExperimentConfig& cfg, std::ostream& out);
int cmd_train(const ExperimentConfig& cfg, std::ostream& out);
int cmd_solve(const ExperimentConfig& cfg, std::ostream& out);
int cmd_bench(const ExperimentConfig& cfg, std::ostream& out);

/// Full command line front end; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fpno
