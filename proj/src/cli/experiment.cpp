#include "fpno/cli/experiment.hpp"

#include "fpno/errors.hpp"
#include "fpno/mesh/transfer.hpp"
#include "fpno/problems/factory.hpp"
#include "fpno/solvers/incremental.hpp"
#include "fpno/solvers/np_newton.hpp"

namespace fpno {

Method parse_method(const std::string& s) {
  if (s == "newton-ls") return Method::NewtonLs;
  if (s == "newton-tr") return Method::NewtonTr;
  if (s == "np-newton-ls") return Method::NpNewtonLs;
  if (s == "np-newton-tr") return Method::NpNewtonTr;
  if (s == "ic-newton-ls") return Method::IcNewtonLs;
  throw ConfigError("unknown method '" + s + "'");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::NewtonLs: return "newton-ls";
    case Method::NewtonTr: return "newton-tr";
    case Method::NpNewtonLs: return "np-newton-ls";
    case Method::NpNewtonTr: return "np-newton-tr";
    case Method::IcNewtonLs: return "ic-newton-ls";
  }
  return "?";
}

bool needs_model(Method m) { return m == Method::NpNewtonLs || m == Method::NpNewtonTr; }

Vec sample_forcing(const Mesh& mesh, const MeshDescriptor& coarse, const GrfSpec& spec, std::uint64_t seed) {
  if (mesh.num_nodes() <= kMaxDenseGrfNodes) return sample_grf(mesh.nodes(), spec, seed);
  const Mesh cm = build_unit_square_mesh(coarse);
  if (cm.num_nodes() > kMaxDenseGrfNodes) throw Unsupported("coarse sampling mesh is too large for a dense GRF");
  return build_transfer(cm, mesh).prolong(sample_grf(cm.nodes(), spec, seed));
}

Vec case_parameters(const ExperimentConfig& cfg, const std::string& case_name, const Mesh& mesh,
                    std::uint64_t seed) {
  if (cfg.problem == ProblemKind::NonlinearPoisson) {
    if (case_name == "I") return Vec::Ones(static_cast<Eigen::Index>(mesh.num_nodes()));
    GrfSpec spec = cfg.data.forcing;
    if (case_name == "III") spec.sigma = cfg.case3_sigma;
    else if (case_name != "II") throw ConfigError("unknown Poisson case '" + case_name + "' (use I, II or III)");
    return sample_forcing(mesh, cfg.train_mesh, spec, seed);
  }
  if (case_name == "I") return Vec::Constant(1, cfg.small_displacement);
  if (case_name == "II") return Vec::Constant(1, cfg.large_displacement);
  throw ConfigError("unknown elasticity case '" + case_name + "' (use I or II)");
}

SolveReport run_method(const ExperimentConfig& cfg, Method method, std::shared_ptr<const Mesh> mesh, const Vec& zeta,
                       std::shared_ptr<const FpnoModel> model) {
  if (method == Method::IcNewtonLs) {
    if (cfg.problem != ProblemKind::NeoHookean) throw ConfigError("incremental loading applies to elasticity only");
    ElasticityParams base;
    return incremental_loading(mesh, base, zeta[0], cfg.load_step, InnerSolver::LineSearch, cfg.solve);
  }
  const auto problem = make_problem(cfg.problem, mesh, zeta);
  const Vec u0 = problem->zero_initial_guess();
  switch (method) {
    case Method::NewtonLs: return newton_ls(*problem, u0, cfg.solve);
    case Method::NewtonTr: return newton_tr(*problem, u0, cfg.solve);
    case Method::NpNewtonLs:
    case Method::NpNewtonTr: {
      if (!model) throw ConfigError("method " + to_string(method) + " needs a trained model");
      const FpnoPreconditioner precond(BoundFpno(model, *mesh));
      const InnerSolver inner = method == Method::NpNewtonLs ? InnerSolver::LineSearch : InnerSolver::TrustRegion;
      return np_newton(*problem, u0, inner, precond, cfg.solve);
    }
    case Method::IcNewtonLs: break;
  }
  throw ConfigError("unsupported method");
}

double speedup_pct(double t_base, double t_new) { return (t_base / t_new - 1.0) * 100.0; }

std::string speedup_field(const SolveReport& base, const SolveReport& row, bool is_baseline) {
  if (is_baseline || row.outcome != Outcome::Converged) return "";
  if (base.outcome != Outcome::Converged) return "inf";
  return format_double(speedup_pct(base.wall_time, row.wall_time));
}

}  // namespace fpno
