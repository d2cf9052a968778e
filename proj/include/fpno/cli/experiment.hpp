#pragma once

#include <memory>
#include <string>

#include "fpno/cli/config.hpp"
#include "fpno/nn/fpno_model.hpp"
#include "fpno/solvers/report.hpp"

namespace fpno {

enum class Method { NewtonLs, NewtonTr, NpNewtonLs, NpNewtonTr, IcNewtonLs };

/// "newton-ls", "newton-tr", "np-newton-ls", "np-newton-tr", "ic-newton-ls";
/// anything else is a ConfigError.
Method parse_method(const std::string& s);
std::string to_string(Method m);
bool needs_model(Method m);

/// Largest point set sampled with a dense covariance factorization. Finer
/// meshes receive a field sampled on `coarse` and interpolated.
constexpr std::size_t kMaxDenseGrfNodes = 4500;

Vec sample_forcing(const Mesh& mesh, const MeshDescriptor& coarse, const GrfSpec& spec, std::uint64_t seed);

/// Parameter vector of a benchmark case on `mesh`. Poisson: I f = 1,
/// II GRF(sigma), III GRF(case3 sigma). Elasticity: I small, II large top
/// displacement.
Vec case_parameters(const ExperimentConfig& cfg, const std::string& case_name, const Mesh& mesh, std::uint64_t seed);

/// Runs one method from the zero-interior initial guess.
SolveReport run_method(const ExperimentConfig& cfg, Method method, std::shared_ptr<const Mesh> mesh, const Vec& zeta,
                       std::shared_ptr<const FpnoModel> model);

/// (t_base / t_new - 1) * 100.
double speedup_pct(double t_base, double t_new);
/// Speedup column of a bench row: empty for the baseline itself or a
/// non-converged row, "inf" when only the row converged.
std::string speedup_field(const SolveReport& base, const SolveReport& row, bool is_baseline);

}  // namespace fpno
