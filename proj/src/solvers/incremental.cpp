#include "fpno/solvers/incremental.hpp"

#include <chrono>
#include <cmath>

#include <fmt/format.h>

#include "fpno/errors.hpp"

namespace fpno {

SolveResult incremental_loading_with_solution(std::shared_ptr<const Mesh> mesh, const ElasticityParams& base,
                                              double total, double delta, InnerSolver inner,
                                              const SolveOptions& opts) {
  if (!(delta > 0.0) || !(total > 0.0)) throw ConfigError("incremental loading needs positive total and delta");
  const double ratio = total / delta;
  const long steps = std::lround(ratio);
  if (steps < 1 || std::abs(static_cast<double>(steps) * delta - total) > 1e-12) {
    throw ConfigError(fmt::format("load step {} does not divide total displacement {}", delta, total));
  }

  const auto start = std::chrono::steady_clock::now();
  SolveResult out;
  SolveReport& rep = out.report;
  rep.outcome = Outcome::Converged;
  for (long k = 1; k <= steps; ++k) {
    ElasticityParams params = base;
    params.top_displacement = k == steps ? total : total * static_cast<double>(k) / static_cast<double>(steps);
    const NeoHookeanProblem problem(mesh, params);
    const Vec u0 = k == 1 ? problem.zero_initial_guess() : out.solution;
    SolveResult inc = newton_solve_with_solution(problem, u0, inner, opts);
    for (auto rec : inc.report.history) {
      if (rec.iter > 0) rec.iter += rep.iterations;
      else rec.iter = rep.iterations;
      rep.history.push_back(rec);
    }
    rep.iterations += inc.report.iterations;
    out.solution = std::move(inc.solution);
    if (inc.report.outcome != Outcome::Converged) {
      rep.outcome = Outcome::Diverged;
      rep.detail = fmt::format("increment {} of {} (u_t = {}) ended {}", k, steps, params.top_displacement,
                               to_string(inc.report.outcome));
      break;
    }
  }
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

SolveReport incremental_loading(std::shared_ptr<const Mesh> mesh, const ElasticityParams& base, double total,
                                double delta, InnerSolver inner, const SolveOptions& opts) {
  return incremental_loading_with_solution(std::move(mesh), base, total, delta, inner, opts).report;
}

}  // namespace fpno
