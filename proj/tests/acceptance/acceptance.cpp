// Acceptance checks. Each criterion prints one PASS/FAIL line; the exit code
// is nonzero when any selected criterion fails.
//
//   acceptance                 run criteria 1-6 and 8-10
//   acceptance --criterion N   run criterion N only (7 is the long training run)

#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <string>

#include <fmt/format.h>

#include "fpno/cli/config.hpp"
#include "fpno/cli/experiment.hpp"
#include "fpno/errors.hpp"
#include "fpno/grf/grf.hpp"
#include "fpno/nn/fpno_model.hpp"
#include "fpno/problems/neo_hookean.hpp"
#include "fpno/problems/poisson.hpp"
#include "fpno/solvers/convergence.hpp"
#include "fpno/solvers/incremental.hpp"
#include "fpno/solvers/newton.hpp"
#include "fpno/solvers/np_newton.hpp"
#include "fpno/training/binary_io.hpp"
#include "fpno/training/dataset.hpp"
#include "fpno/training/model_io.hpp"
#include "fpno/training/trainer.hpp"

namespace fs = std::filesystem;
using namespace fpno;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

fs::path work_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "fpno_acceptance" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

double rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).norm() / std::max(b.norm(), 1e-300); }

Eigen::MatrixXd fd_jacobian(const NonlinearSystem& sys, const Vec& u, double h = 1e-6) {
  Eigen::MatrixXd j(sys.size(), sys.size());
  Vec x = u;
  for (Eigen::Index c = 0; c < u.size(); ++c) {
    x[c] = u[c] + h;
    const Vec fp = sys.residual(x);
    x[c] = u[c] - h;
    const Vec fm = sys.residual(x);
    x[c] = u[c];
    j.col(c) = (fp - fm) / (2 * h);
  }
  return j;
}

Vec random_vec(Eigen::Index n, double scale, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-scale, scale);
  Vec v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

Verdict poisson_baseline(int n, double time_limit) {
  auto mesh = std::make_shared<const Mesh>(build_unit_square_mesh(n, ElemKind::P1Tri));
  PoissonProblem prob(mesh, {Vec::Ones(static_cast<Eigen::Index>(mesh->num_nodes()))});
  const auto t0 = std::chrono::steady_clock::now();
  const SolveReport rep = newton_ls(prob, prob.zero_initial_guess(), SolveOptions{});
  const double t = seconds_since(t0);
  const bool ok = rep.outcome == Outcome::Converged && std::abs(rep.iterations - 14) <= 3 && t < time_limit;
  return {ok, fmt::format("n={} outcome={} iterations={} (target 14 +/- 3) time={:.2f}s (limit {}s)", n,
                          to_string(rep.outcome), rep.iterations, t, time_limit)};
}

Verdict criterion1() { return poisson_baseline(32, 5.0); }
Verdict criterion2() { return poisson_baseline(128, 60.0); }

Verdict criterion3() {
  ExperimentConfig cfg;
  cfg.train_mesh = MeshDescriptor{32, ElemKind::P1Tri, TagConvention::Poisson, std::nullopt};
  cfg.case3_sigma = 1.0;
  auto mesh = std::make_shared<const Mesh>(build_unit_square_mesh(cfg.train_mesh));
  int diverged = 0;
  std::string outcomes;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const std::uint64_t seed = 900000 + s;
    const Vec f = case_parameters(cfg, "III", *mesh, seed);
    PoissonProblem prob(mesh, {f});
    const SolveReport rep = newton_ls(prob, prob.zero_initial_guess(), cfg.solve);
    diverged += rep.outcome == Outcome::Diverged;
    outcomes += fmt::format(" {}:{}/{}", seed, to_string(rep.outcome), rep.iterations);
  }
  return {diverged >= 3, fmt::format("{} of 10 Case III seeds diverged (need >= 3);{}", diverged, outcomes)};
}

Verdict criterion4() {
  auto mesh = std::make_shared<const Mesh>(build_unit_square_mesh(16, ElemKind::P1Tri));
  const MeshDescriptor md = mesh->descriptor();
  // fixed point: a trained-looking (random) model must return u when F(u) = 0
  FpnoModel random_model(FpnoArchitecture::make(ProblemKind::NonlinearPoisson, md, 16, 16), 5);
  Vec p = random_model.params();
  std::mt19937_64 rng(6);
  std::normal_distribution<double> nd(0.0, 0.2);
  for (auto& v : p) v = nd(rng);
  random_model.set_params(p);
  const BoundFpno random_bound(std::make_shared<const FpnoModel>(random_model), *mesh);
  bool fixed = true;
  for (std::uint64_t s = 0; s < 5; ++s) {
    PoissonProblem prob(mesh, {sample_grf(mesh->nodes(), GrfSpec{}, 100 + s)});
    const Vec u = random_vec(prob.size(), 1.0, 200 + s);
    const Vec v = random_bound.apply(prob, u, Vec::Zero(prob.size()));
    for (Eigen::Index i = 0; i < u.size(); ++i) fixed = fixed && std::memcmp(&u[i], &v[i], sizeof(double)) == 0;
  }
  // zero-initialized model: NP-Newton-LS reproduces Newton-LS bit for bit
  auto zero_model = std::make_shared<const FpnoModel>(FpnoArchitecture::make(ProblemKind::NonlinearPoisson, md, 16, 16), 7);
  const FpnoPreconditioner pre(BoundFpno(zero_model, *mesh));
  int identical = 0;
  for (std::uint64_t s = 0; s < 5; ++s) {
    PoissonProblem prob(mesh, {sample_grf(mesh->nodes(), GrfSpec{}, 300 + s)});
    const SolveReport a = newton_ls(prob, prob.zero_initial_guess(), SolveOptions{});
    const SolveReport b = np_newton(prob, prob.zero_initial_guess(), InnerSolver::LineSearch, pre, SolveOptions{});
    const auto ha = a.residual_history(), hb = b.residual_history();
    identical += ha.size() == hb.size() && std::memcmp(ha.data(), hb.data(), ha.size() * sizeof(double)) == 0 &&
                 a.outcome == b.outcome;
  }
  return {fixed && identical == 5,
          fmt::format("fixed point bit-exact on 5 states: {}; identical histories {}/5", fixed ? "yes" : "no", identical)};
}

Verdict criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  auto tri = std::make_shared<const Mesh>(build_unit_square_mesh(4, ElemKind::P1Tri));
  PoissonProblem np(tri, {random_vec(static_cast<Eigen::Index>(tri->num_nodes()), 1.0, 1)});
  const Vec unp = random_vec(np.size(), 1.0, 2);
  const double e_np = rel(np.jacobian(unp).to_dense(), fd_jacobian(np, unp));

  auto quad = std::make_shared<const Mesh>(build_unit_square_mesh(4, ElemKind::Q1Quad));
  ElasticityParams params;
  params.top_displacement = 0.2;
  NeoHookeanProblem he(quad, params);
  const Vec uhe = random_vec(he.size(), 0.05, 3);
  const double e_he = rel(he.jacobian(uhe).to_dense(), fd_jacobian(he, uhe));

  Vec g(he.size());
  Vec x = uhe;
  const double h = 1e-6;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    x[i] = uhe[i] + h;
    const double ep = he.energy(x);
    x[i] = uhe[i] - h;
    const double em = he.energy(x);
    x[i] = uhe[i];
    g[i] = (ep - em) / (2 * h);
  }
  const double e_energy = rel(he.residual(uhe), g);

  const MeshDescriptor md{2, ElemKind::P1Tri, TagConvention::Poisson, std::nullopt};
  FpnoModel model(FpnoArchitecture::make(ProblemKind::NonlinearPoisson, md, 8, 8), 3);
  Vec p = model.params();
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd(0.0, 0.3);
  for (auto& v : p) v = nd(rng);
  model.set_params(p);
  Matrix u(9, 2), z(9, 2), r(9, 2), c(9, 2);
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    u.data()[i] = 0.3 * nd(rng);
    z.data()[i] = 0.3 * nd(rng);
    r.data()[i] = nd(rng);
    c.data()[i] = nd(rng);
  }
  for (Eigen::Index j = 0; j < 2; ++j) r.col(j) /= r.col(j).norm();
  const Vec rn = Vec::LinSpaced(2, 0.2, 0.8);
  FpnoModel::Tape tape;
  model.predict(u, r, rn, z, tape);
  Vec grad = Vec::Zero(model.num_params());
  model.backward(tape, c, grad);
  std::uniform_int_distribution<std::int64_t> pick(0, model.num_params() - 1);
  Vec got(20), fd(20);
  for (int k = 0; k < 20; ++k) {
    const auto idx = pick(rng);
    Vec q = p;
    q[idx] = p[idx] + 1e-5;
    model.set_params(q);
    const double fp = model.predict(u, r, rn, z).cwiseProduct(c).sum();
    q[idx] = p[idx] - 1e-5;
    model.set_params(q);
    const double fm = model.predict(u, r, rn, z).cwiseProduct(c).sum();
    fd[k] = (fp - fm) / 2e-5;
    got[k] = grad[idx];
  }
  const double e_net = rel(got, fd);
  const double t = seconds_since(t0);
  const bool ok = e_np < 1e-6 && e_he < 1e-6 && e_energy < 1e-6 && e_net < 1e-5 && t < 30.0;
  return {ok, fmt::format("poisson J {:.2e}, neo-hookean J {:.2e} (< 1e-6); energy gradient {:.2e} (< 1e-6); "
                          "network {:.2e} (< 1e-5); {:.2f}s",
                          e_np, e_he, e_energy, e_net, t)};
}

Verdict criterion6() {
  const std::vector<Point2> pts = {{0.5, 0.5}, {0.55, 0.5}, {0.5, 0.55}, {0.45, 0.48}, {0.53, 0.56}};
  const GrfSpec spec{0.0, 0.1, 0.1, 1e-10};
  const Eigen::MatrixXd c = covariance_matrix(pts, spec);
  bool diag = true;
  for (Eigen::Index i = 0; i < 5; ++i) diag = diag && c(i, i) == spec.sigma * spec.sigma + spec.jitter;
  GrfSampler sampler(pts, spec);
  const int n = 10000;
  Eigen::MatrixXd samples(5, n);
  for (int k = 0; k < n; ++k) samples.col(k) = sampler.sample(static_cast<std::uint64_t>(k));
  const Vec mean = samples.rowwise().mean();
  const Eigen::MatrixXd centred = samples.colwise() - mean;
  const Eigen::MatrixXd emp = centred * centred.transpose() / (n - 1);
  double worst = 0;
  for (Eigen::Index i = 0; i < 5; ++i)
    for (Eigen::Index j = 0; j < 5; ++j) worst = std::max(worst, std::abs(emp(i, j) - c(i, j)) / c(i, j));
  return {diag && worst < 0.05,
          fmt::format("max relative covariance error {:.4f} (< 0.05); diagonal = sigma^2 + jitter: {}", worst,
                      diag ? "yes" : "no")};
}

Verdict criterion7() {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg = load_config(std::string(FPNO_SOURCE_DIR) + "/configs/np_desk.ini");
  cfg.out_dir = work_dir("criterion7").string();
  const Dataset data = generate_dataset(cfg.data);
  const double t_data = seconds_since(t0);
  auto model = std::make_shared<FpnoModel>(
      FpnoArchitecture::make(cfg.problem, cfg.train_mesh, cfg.width, cfg.latent, cfg.depth), cfg.model_seed);
  const TrainResult tr = train(*model, data, cfg.train);
  const double t_train = seconds_since(t0) - t_data;
  std::shared_ptr<const FpnoModel> trained = model;

  auto mesh = std::make_shared<const Mesh>(build_unit_square_mesh(cfg.solve_mesh()));
  int wins = 0, halved = 0;
  std::string rows;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const Vec zeta = case_parameters(cfg, "II", *mesh, cfg.solve_seed + i);
    const SolveReport base = run_method(cfg, Method::NewtonLs, mesh, zeta, nullptr);
    const SolveReport np = run_method(cfg, Method::NpNewtonLs, mesh, zeta, trained);
    const bool np_ok = np.outcome == Outcome::Converged;
    const bool base_ok = base.outcome == Outcome::Converged;
    if (np_ok && (!base_ok || np.iterations < base.iterations)) ++wins;
    if (np_ok && base_ok && 2 * np.iterations <= base.iterations) ++halved;
    rows += fmt::format(" {}/{}", np.iterations, base.iterations);
  }
  const double t = seconds_since(t0);
  const bool ok = !tr.aborted && tr.best_val_rel_l2 <= 0.05 && wins >= 14 && halved >= 1 && t < 1800.0;
  return {ok, fmt::format("{} snapshots, best val rel-L2 {:.4f} at epoch {} (<= 0.05, stop: {}); NP wins {}/20 "
                          "(>= 14), halved {} (>= 1); np/base iters:{}; data {:.0f}s train {:.0f}s total {:.0f}s",
                          data.num_snapshots(), tr.best_val_rel_l2, tr.best_epoch, tr.stop_reason, wins, halved, rows,
                          t_data, t_train, t)};
}

Verdict criterion8() {
  auto mesh = std::make_shared<const Mesh>(build_unit_square_mesh(8, ElemKind::Q1Quad));
  ElasticityParams params;
  params.top_displacement = 1.0;
  NeoHookeanProblem prob(mesh, params);
  const SolveOptions opts;
  const SolveReport single = newton_ls(prob, prob.zero_initial_guess(), opts);
  const SolveReport ic = incremental_loading(mesh, ElasticityParams{}, 1.0, 0.1, InnerSolver::LineSearch, opts);
  const SolveReport tr = newton_tr(prob, prob.zero_initial_guess(), opts);
  const double per_increment = ic.iterations / 10.0;
  const bool ok = single.outcome != Outcome::Converged && ic.outcome == Outcome::Converged &&
                  tr.outcome == Outcome::Converged && tr.iterations > per_increment;
  return {ok, fmt::format("single-shot Newton-LS {} after {} iterations; IC-Newton-LS {} in {} ({:.1f} per "
                          "increment); Newton-TR {} in {}",
                          to_string(single.outcome), single.iterations, to_string(ic.outcome), ic.iterations,
                          per_increment, to_string(tr.outcome), tr.iterations)};
}

Verdict criterion9() {
  const SolveOptions o;
  using S = ConvergenceState;
  const bool ok = check_convergence(1e-15, 1e-10, o) == S::Converged &&
                  check_convergence(std::nextafter(1e-15, 1.0), 1e-10, o) == S::Continue &&
                  check_convergence(1e-9, 1.0, o) == S::Converged &&
                  check_convergence(std::nextafter(1e-9, 1.0), 1.0, o) == S::Continue &&
                  check_convergence(1e-8, 10.0, o) == S::Converged && check_convergence(1e-16, 1.0, o) == S::Converged &&
                  check_convergence(1e4, 1.0, o) == S::Continue &&
                  check_convergence(std::nextafter(1e4, 1e5), 1.0, o) == S::Diverged &&
                  check_convergence(2e4, 1.0, o) == S::Diverged && check_convergence(0.0, 0.0, o) == S::Converged;
  return {ok, "abs 1e-15, rel 1e-9 and cap 1e4 boundaries checked at adjacent doubles"};
}

Verdict criterion10() {
  const fs::path dir = work_dir("criterion10");
  const MeshDescriptor md{4, ElemKind::P1Tri, TagConvention::Poisson, std::nullopt};
  FpnoModel model(FpnoArchitecture::make(ProblemKind::NonlinearPoisson, md, 8, 8), 11);
  Vec p = model.params();
  for (Eigen::Index i = 0; i < p.size(); ++i) p[i] += std::sin(1.3 * i) * 1e-3;
  model.set_params(p);
  save_model((dir / "a.bin").string(), model);
  const FpnoModel back = load_model((dir / "a.bin").string());
  save_model((dir / "b.bin").string(), back);
  const bool model_ok = back.params() == model.params() &&
                        read_file((dir / "a.bin").string()) == read_file((dir / "b.bin").string());

  DataGenConfig dcfg;
  dcfg.mesh = md;
  dcfg.num_guesses = 4;
  const Dataset data = generate_dataset(dcfg);
  save_dataset((dir / "d1.bin").string(), data);
  const Dataset dback = load_dataset((dir / "d1.bin").string());
  save_dataset((dir / "d2.bin").string(), dback);
  const bool data_ok = dback == data && read_file((dir / "d1.bin").string()) == read_file((dir / "d2.bin").string());

  SolveReport base, row;
  base.outcome = row.outcome = Outcome::Converged;
  base.wall_time = 0.0795;
  row.wall_time = 0.0336;
  const std::string field = speedup_field(base, row, false);
  const bool speed_ok = std::abs(std::stod(field) - 136.60) < 0.01;
  return {model_ok && data_ok && speed_ok,
          fmt::format("model round trip {}, dataset round trip {}, speedup field {} (136.60 +/- 0.01)",
                      model_ok ? "bit-exact" : "DIFFERS", data_ok ? "bit-exact" : "DIFFERS", field)};
}

const std::vector<std::function<Verdict()>> kCriteria = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                                         criterion6, criterion7, criterion8, criterion9, criterion10};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      selected.push_back(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--criterion N]...\n";
      return 2;
    }
  }
  if (selected.empty()) selected = {1, 2, 3, 4, 5, 6, 8, 9, 10};
  bool all = true;
  for (int c : selected) {
    if (c < 1 || c > static_cast<int>(kCriteria.size())) {
      std::cerr << "no criterion " << c << "\n";
      return 2;
    }
    Verdict v;
    try {
      v = kCriteria[c - 1]();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::cout << fmt::format("criterion {:>2}: {}  {}", c, v.pass ? "PASS" : "FAIL", v.detail) << std::endl;
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
