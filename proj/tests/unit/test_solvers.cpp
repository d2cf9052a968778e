#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include <gtest/gtest.h>

#include "fpno/errors.hpp"
#include "fpno/grf/grf.hpp"
#include "fpno/nn/fpno_model.hpp"
#include "fpno/problems/neo_hookean.hpp"
#include "fpno/problems/poisson.hpp"
#include "fpno/solvers/convergence.hpp"
#include "fpno/solvers/incremental.hpp"
#include "fpno/solvers/newton.hpp"
#include "fpno/solvers/np_newton.hpp"
#include "fpno/solvers/report.hpp"

namespace fpno {
namespace {

// F(u) = u^2 - c, componentwise.
class Quadratic final : public NonlinearSystem {
 public:
  explicit Quadratic(double c, std::int64_t n = 1) : c_(c), n_(n) {}
  std::int64_t size() const override { return n_; }
  Vec residual(const Vec& u) const override { return (u.array().square() - c_).matrix(); }
  CsrMatrix jacobian(const Vec& u) const override {
    std::vector<Triplet> t;
    for (std::int64_t i = 0; i < n_; ++i) t.push_back({i, i, 2.0 * u[i]});
    return csr_from_triplets(t, n_, n_);
  }

 private:
  double c_;
  std::int64_t n_;
};

std::shared_ptr<const Mesh> tri_mesh(int n) {
  return std::make_shared<const Mesh>(build_unit_square_mesh(n, ElemKind::P1Tri));
}

TEST(Convergence, AbsoluteThreshold) {
  const SolveOptions o;
  EXPECT_EQ(check_convergence(1e-16, 1.0, o), ConvergenceState::Converged);
  EXPECT_EQ(check_convergence(1e-15, 1e-10, o), ConvergenceState::Converged);
  EXPECT_EQ(check_convergence(std::nextafter(1e-15, 1.0), 1e-10, o), ConvergenceState::Continue);
}

TEST(Convergence, RelativeThreshold) {
  const SolveOptions o;
  EXPECT_EQ(check_convergence(1e-8, 10.0, o), ConvergenceState::Converged);
  EXPECT_EQ(check_convergence(1e-9, 1.0, o), ConvergenceState::Converged);
  EXPECT_EQ(check_convergence(std::nextafter(1e-9, 1.0), 1.0, o), ConvergenceState::Continue);
}

TEST(Convergence, DivergenceCap) {
  const SolveOptions o;
  EXPECT_EQ(check_convergence(2e4, 1.0, o), ConvergenceState::Diverged);
  EXPECT_EQ(check_convergence(1e4, 1.0, o), ConvergenceState::Continue);
  EXPECT_EQ(check_convergence(std::nextafter(1e4, 1e5), 1.0, o), ConvergenceState::Diverged);
  EXPECT_EQ(check_convergence(std::nan(""), 1.0, o), ConvergenceState::Diverged);
}

TEST(Convergence, ZeroInitialResidual) {
  EXPECT_EQ(check_convergence(0.0, 0.0, SolveOptions{}), ConvergenceState::Converged);
}

TEST(Options, InvalidRejected) {
  SolveOptions o;
  o.rel_tol = 0.0;
  EXPECT_THROW(validate(o), ConfigError);
  o = SolveOptions{};
  o.tr.shrink = 1.5;
  EXPECT_THROW(validate(o), ConfigError);
}

TEST(NewtonLs, ScalarQuadraticConvergesQuadratically) {
  const Quadratic f(4.0);
  const SolveResult res = newton_solve_with_solution(f, Vec::Constant(1, 3.0), InnerSolver::LineSearch, SolveOptions{});
  ASSERT_EQ(res.report.outcome, Outcome::Converged);
  EXPECT_NEAR(res.solution[0], 2.0, 1e-9);
  const auto r = res.report.residual_history();
  for (std::size_t k = 1; k + 1 < r.size(); ++k)
    if (r[k] > 1e-12) EXPECT_LT(r[k + 1] / (r[k] * r[k]), 1.0);
  EXPECT_EQ(res.report.history.front().iter, 0);
  EXPECT_EQ(res.report.history.front().step, 0.0);
}

TEST(NewtonLs, LinearProblemInOneStep) {
  auto mesh = tri_mesh(8);
  PoissonProblem prob(mesh, {Vec::Ones(mesh->num_nodes()), 0.01, 0.0});
  const SolveReport rep = newton_ls(prob, prob.zero_initial_guess(), SolveOptions{});
  EXPECT_EQ(rep.outcome, Outcome::Converged);
  EXPECT_EQ(rep.iterations, 1);
}

TEST(NewtonLs, SingularJacobianReported) {
  const Quadratic f(-1.0);  // u^2 + 1, J(0) = 0
  const SolveReport rep = newton_ls(f, Vec::Zero(1), SolveOptions{});
  EXPECT_EQ(rep.outcome, Outcome::LinearSolveFailed);
}

TEST(NewtonLs, IterationLimit) {
  SolveOptions o;
  o.max_iters = 2;
  const SolveReport rep = newton_ls(Quadratic(4.0), Vec::Constant(1, 100.0), o);
  EXPECT_EQ(rep.outcome, Outcome::MaxIters);
  EXPECT_EQ(rep.iterations, 2);
}

TEST(NewtonLs, DecreasesResidualMonotonically) {
  auto mesh = tri_mesh(8);
  PoissonProblem prob(mesh, {sample_grf(mesh->nodes(), GrfSpec{0.0, 1.0, 0.1, 1e-10}, 5)});
  const SolveReport rep = newton_ls(prob, prob.zero_initial_guess(), SolveOptions{});
  const auto r = rep.residual_history();
  for (std::size_t k = 1; k < r.size(); ++k) EXPECT_LE(r[k], r[k - 1]);
}

TEST(NewtonTr, ConvergesOnPoisson) {
  auto mesh = tri_mesh(8);
  PoissonProblem prob(mesh, {Vec::Ones(mesh->num_nodes())});
  const SolveResult tr = newton_solve_with_solution(prob, prob.zero_initial_guess(), InnerSolver::TrustRegion, SolveOptions{});
  const SolveResult ls = newton_solve_with_solution(prob, prob.zero_initial_guess(), InnerSolver::LineSearch, SolveOptions{});
  ASSERT_EQ(tr.report.outcome, Outcome::Converged);
  EXPECT_LT((tr.solution - ls.solution).norm(), 1e-8 * ls.solution.norm());
}

TEST(NewtonTr, ScalarQuadratic) {
  const SolveResult res =
      newton_solve_with_solution(Quadratic(4.0, 3), Vec::Constant(3, 50.0), InnerSolver::TrustRegion, SolveOptions{});
  ASSERT_EQ(res.report.outcome, Outcome::Converged);
  EXPECT_NEAR(res.solution[0], 2.0, 1e-5);
}

TEST(NewtonTr, PersistentSingularityFails) {
  const SolveReport rep = newton_tr(Quadratic(-1.0), Vec::Zero(1), SolveOptions{});
  EXPECT_NE(rep.outcome, Outcome::Converged);
}

TEST(NewtonLs, ElasticityInversionRejectedByLineSearch) {
  auto mesh = std::make_shared<const Mesh>(build_unit_square_mesh(4, ElemKind::Q1Quad));
  ElasticityParams p;
  p.top_displacement = 0.3;
  NeoHookeanProblem prob(mesh, p);
  const SolveReport rep = newton_ls(prob, prob.zero_initial_guess(), SolveOptions{});
  EXPECT_EQ(rep.outcome, Outcome::Converged);
}

TEST(NpNewton, UntrainedModelMatchesPlainNewtonBitExact) {
  auto mesh = tri_mesh(8);
  const MeshDescriptor md = mesh->descriptor();
  auto model = std::make_shared<const FpnoModel>(FpnoArchitecture::make(ProblemKind::NonlinearPoisson, md, 8, 8), 3);
  const FpnoPreconditioner pre(BoundFpno(model, *mesh));
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    PoissonProblem prob(mesh, {sample_grf(mesh->nodes(), GrfSpec{0.0, 0.1, 0.1, 1e-10}, seed)});
    for (auto inner : {InnerSolver::LineSearch, InnerSolver::TrustRegion}) {
      const SolveReport a = newton_solve(prob, prob.zero_initial_guess(), inner, SolveOptions{});
      const SolveReport b = np_newton(prob, prob.zero_initial_guess(), inner, pre, SolveOptions{});
      EXPECT_EQ(a.outcome, b.outcome);
      EXPECT_EQ(a.residual_history(), b.residual_history());
    }
  }
}

class ExactPreconditioner final : public NonlinearPreconditioner {
 public:
  explicit ExactPreconditioner(Vec sol) : sol_(std::move(sol)) {}
  Vec apply(const NonlinearProblem&, const Vec&, const Vec&) const override { return sol_; }

 private:
  Vec sol_;
};

class NanPreconditioner final : public NonlinearPreconditioner {
 public:
  Vec apply(const NonlinearProblem&, const Vec&, const Vec&) const override { throw ModelNaN("nan"); }
};

TEST(NpNewton, ExactMapConvergesImmediately) {
  auto mesh = tri_mesh(6);
  PoissonProblem prob(mesh, {Vec::Ones(mesh->num_nodes())});
  const SolveResult ref = newton_solve_with_solution(prob, prob.zero_initial_guess(), InnerSolver::LineSearch, SolveOptions{});
  const SolveReport rep =
      np_newton(prob, prob.zero_initial_guess(), InnerSolver::LineSearch, ExactPreconditioner(ref.solution), SolveOptions{});
  EXPECT_EQ(rep.outcome, Outcome::Converged);
  EXPECT_EQ(rep.iterations, 1);
  EXPECT_TRUE(rep.history.back().precond_used);
}

TEST(NpNewton, ModelNanFallsBackToPlainSolver) {
  auto mesh = tri_mesh(6);
  PoissonProblem prob(mesh, {Vec::Ones(mesh->num_nodes())});
  const SolveReport plain = newton_ls(prob, prob.zero_initial_guess(), SolveOptions{});
  const SolveReport rep =
      np_newton(prob, prob.zero_initial_guess(), InnerSolver::LineSearch, NanPreconditioner(), SolveOptions{});
  EXPECT_TRUE(rep.model_fallback);
  EXPECT_EQ(rep.outcome, Outcome::Converged);
  EXPECT_EQ(rep.residual_history(), plain.residual_history());
}

TEST(Incremental, SingleIncrementEqualsDirectSolve) {
  auto mesh = std::make_shared<const Mesh>(build_unit_square_mesh(4, ElemKind::Q1Quad));
  ElasticityParams p;
  p.top_displacement = 0.1;
  NeoHookeanProblem prob(mesh, p);
  const SolveReport direct = newton_ls(prob, prob.zero_initial_guess(), SolveOptions{});
  const SolveReport inc = incremental_loading(mesh, ElasticityParams{}, 0.1, 0.1, InnerSolver::LineSearch, SolveOptions{});
  EXPECT_EQ(inc.outcome, Outcome::Converged);
  EXPECT_EQ(inc.iterations, direct.iterations);
  EXPECT_EQ(inc.residual_history(), direct.residual_history());
}

TEST(Incremental, TenIncrements) {
  auto mesh = std::make_shared<const Mesh>(build_unit_square_mesh(4, ElemKind::Q1Quad));
  const SolveResult res =
      incremental_loading_with_solution(mesh, ElasticityParams{}, 1.0, 0.1, InnerSolver::LineSearch, SolveOptions{});
  ASSERT_EQ(res.report.outcome, Outcome::Converged);
  int starts = 0;
  for (const auto& r : res.report.history) starts += r.step == 0.0;
  EXPECT_EQ(starts, 10);
  ElasticityParams full;
  full.top_displacement = 1.0;
  NeoHookeanProblem prob(mesh, full);
  EXPECT_LE(prob.residual(res.solution).norm(), 1e-8);
  EXPECT_EQ(res.report.history.back().iter, res.report.iterations);
}

TEST(Incremental, StepMustDivideTotal) {
  auto mesh = std::make_shared<const Mesh>(build_unit_square_mesh(2, ElemKind::Q1Quad));
  EXPECT_THROW(incremental_loading(mesh, {}, 1.0, 0.3, InnerSolver::LineSearch, SolveOptions{}), ConfigError);
}

TEST(Report, CsvHeaderAndPrecision) {
  SolveReport rep;
  rep.history.push_back({0, 0.1, 1.0, 0.0, false});
  rep.history.push_back({1, 1.0 / 3.0, 10.0 / 3.0, 1.0, true});
  std::ostringstream os;
  write_report_csv(os, rep);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "iter,res_norm,rel_res,step,precond_used");
  std::getline(is, line);
  std::getline(is, line);
  EXPECT_NE(line.find("0.33333333333333331"), std::string::npos);
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

}  // namespace
}  // namespace fpno
