#include "fpno/cli/commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <memory>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "fpno/cli/experiment.hpp"
#include "fpno/errors.hpp"
#include "fpno/solvers/report.hpp"
#include "fpno/training/model_io.hpp"

namespace fpno {

namespace {

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir + "': " + ec.message());
}

std::shared_ptr<const FpnoModel> load_model_for(const ExperimentConfig& cfg) {
  auto model = std::make_shared<const FpnoModel>(load_model(cfg.model_path()));
  if (model->architecture().problem != cfg.problem) throw ConfigError("model was trained for another problem");
  return model;
}

}  // namespace

void apply_overrides(ExperimentConfig& cfg, const CliOverrides& o, const std::string& verb) {
  if (o.out_dir) cfg.out_dir = *o.out_dir;
  if (o.strict_paper) cfg.solve.strict_paper = true;
  if (o.solve_case) cfg.solve_case = *o.solve_case;
  if (o.method) cfg.method = *o.method;
  if (o.seed) {
    if (verb == "gen-data") {
      cfg.data.seed = *o.seed;
    } else if (verb == "train") {
      cfg.model_seed = *o.seed;
      cfg.train.shuffle_seed = *o.seed;
    } else {
      cfg.solve_seed = *o.seed;
    }
  }
}

int cmd_mesh_info(const ExperimentConfig& cfg, std::ostream& out) {
  const Mesh mesh = build_unit_square_mesh(cfg.train_mesh);
  out << "problem: " << to_string(cfg.problem) << "\n" << mesh_summary(mesh);
  const DofMap dm = boundary_dofs(mesh, cfg.problem, cfg.small_displacement);
  out << "dofs: " << dm.num_dofs() << " (free " << dm.num_free() << ", constrained " << dm.constrained_dofs().size()
      << ")\n";
  if (cfg.solve_n != cfg.train_mesh.n) {
    const Mesh fine = build_unit_square_mesh(cfg.solve_mesh());
    out << "solve mesh n=" << cfg.solve_n << ": nodes " << fine.num_nodes() << ", elements " << fine.num_elements()
        << "\n";
  }
  return kExitOk;
}

int cmd_gen_data(const ExperimentConfig& cfg, std::ostream& out) {
  ensure_dir(cfg.out_dir);
  const auto start = std::chrono::steady_clock::now();
  const Dataset data = generate_dataset(cfg.data, [&](const std::string& msg) { out << msg << "\n"; });
  save_dataset(cfg.dataset_path(), data);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out << "guesses: " << cfg.data.num_guesses << "\n"
      << "kept groups: " << data.groups.size() << "\n"
      << "discarded: " << data.discarded << "\n"
      << "snapshots: " << data.num_snapshots() << "\n"
      << "train/validation snapshots: " << data.num_snapshots(data.train_groups) << "/"
      << data.num_snapshots(data.validation_groups) << "\n";
  if (cfg.target_train_samples > 0) {
    out << "reference train/validation snapshots: " << cfg.target_train_samples << "/"
        << cfg.target_validation_samples << "\n";
  }
  out << fmt::format("time_s: {:.3f}\n", secs) << "dataset: " << cfg.dataset_path() << "\n";
  return kExitOk;
}

int cmd_train(const ExperimentConfig& cfg, std::ostream& out) {
  const Dataset data = load_dataset(cfg.dataset_path());
  if (data.problem != cfg.problem || !(data.mesh == cfg.train_mesh)) {
    throw ConfigError("dataset does not match the configured problem / training mesh");
  }
  ensure_dir(cfg.out_dir);
  const FpnoArchitecture arch = FpnoArchitecture::make(cfg.problem, cfg.train_mesh, cfg.width, cfg.latent, cfg.depth);
  FpnoArchitecture a = arch;
  a.reduction = cfg.reduction;
  FpnoModel model(a, cfg.model_seed);
  out << "parameters: " << model.num_params() << "\n"
      << "train/validation snapshots: " << data.num_snapshots(data.train_groups) << "/"
      << data.num_snapshots(data.validation_groups) << "\n";
  const auto start = std::chrono::steady_clock::now();
  const TrainResult res = train(model, data, cfg.train, [&](const EpochRecord& r) {
    if (r.epoch == 1 || r.epoch % 100 == 0) {
      const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      out << fmt::format("epoch {} train_loss {:.6e} val_rel_l2 {:.6e} ({:.1f} s)\n", r.epoch, r.train_loss,
                         r.val_rel_l2, t)
          << std::flush;
    }
  });
  const std::string history = (std::filesystem::path(cfg.out_dir) / "history.csv").string();
  write_history_csv(history, res.history);
  save_model(cfg.model_path(), model);
  const int last = res.history.empty() ? 0 : res.history.back().epoch;
  out << "stopped at epoch " << last << " (" << res.stop_reason << ")\n"
      << "best epoch: " << res.best_epoch << "\n"
      << "val_rel_l2: " << format_double(res.best_val_rel_l2) << "\n"
      << "model: " << cfg.model_path() << "\n"
      << "history: " << history << "\n";
  return res.aborted ? kExitRuntime : kExitOk;
}

int cmd_solve(const ExperimentConfig& cfg, std::ostream& out) {
  const Method method = parse_method(cfg.method);
  auto mesh = std::make_shared<const Mesh>(build_unit_square_mesh(cfg.solve_mesh()));
  const Vec zeta = case_parameters(cfg, cfg.solve_case, *mesh, cfg.solve_seed);
  const auto model = needs_model(method) ? load_model_for(cfg) : nullptr;
  const SolveReport rep = run_method(cfg, method, mesh, zeta, model);
  ensure_dir(cfg.out_dir);
  const std::string path =
      (std::filesystem::path(cfg.out_dir) / fmt::format("solve_{}_{}.csv", cfg.solve_case, cfg.method)).string();
  write_report_csv(path, rep);
  out << "case: " << cfg.solve_case << "\n"
      << "method: " << cfg.method << "\n"
      << "outcome: " << to_string(rep.outcome) << "\n"
      << "iterations: " << rep.iterations << "\n"
      << "final_residual: " << format_double(rep.final_residual()) << "\n"
      << fmt::format("time_s: {:.4f}\n", rep.wall_time);
  if (!rep.detail.empty()) out << "detail: " << rep.detail << "\n";
  if (rep.model_fallback) out << "note: preconditioner disabled after non-finite output\n";
  out << "report: " << path << "\n";
  return kExitOk;
}

int cmd_bench(const ExperimentConfig& cfg, std::ostream& out) {
  const Method baseline = parse_method(cfg.bench_baseline);
  std::vector<Method> methods{baseline};
  for (const auto& m : cfg.bench_methods) {
    const Method parsed = parse_method(m);
    if (parsed != baseline) methods.push_back(parsed);
  }
  auto mesh = std::make_shared<const Mesh>(build_unit_square_mesh(cfg.solve_mesh()));

  std::shared_ptr<const FpnoModel> model;
  std::string model_error;
  for (Method m : methods) {
    if (!needs_model(m) || model || !model_error.empty()) continue;
    try {
      model = load_model_for(cfg);
    } catch (const Error& e) {
      model_error = e.what();
    }
  }

  ensure_dir(cfg.out_dir);
  const std::string path = (std::filesystem::path(cfg.out_dir) / "bench.csv").string();
  std::ofstream csv(path, std::ios::binary);
  if (!csv) throw Error("cannot open '" + path + "' for writing");
  csv << "case,method,iters,outcome,time_s,speedup_pct\n";
  out << fmt::format("{:<5} {:<14} {:>6} {:<20} {:>10} {:>10}\n", "case", "method", "iters", "outcome", "time_s",
                     "speedup%");
  for (const auto& c : cfg.bench_cases) {
    const Vec zeta = case_parameters(cfg, c, *mesh, cfg.solve_seed);
    SolveReport base;
    for (Method m : methods) {
      std::string iters, outcome, time_s, speed;
      try {
        if (needs_model(m) && !model) throw Error(model_error);
        const SolveReport rep = run_method(cfg, m, mesh, zeta, model);
        if (m == baseline) base = rep;
        iters = std::to_string(rep.iterations);
        outcome = to_string(rep.outcome);
        time_s = format_double(rep.wall_time);
        speed = speedup_field(base, rep, m == baseline);
      } catch (const Error& e) {
        outcome = "ERROR";
        if (m == baseline) base.outcome = Outcome::Diverged;
        out << "  " << c << "/" << to_string(m) << ": " << e.what() << "\n";
      }
      csv << c << ',' << to_string(m) << ',' << iters << ',' << outcome << ',' << time_s << ',' << speed << '\n';
      out << fmt::format("{:<5} {:<14} {:>6} {:<20} {:>10} {:>10}\n", c, to_string(m), iters, outcome,
                         time_s.empty() ? "" : fmt::format("{:.4f}", std::stod(time_s)),
                         speed.empty() || speed == "inf" ? speed : fmt::format("{:.2f}", std::stod(speed)));
    }
  }
  out << "bench: " << path << "\n";
  return kExitOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Newton solvers with a learned nonlinear preconditioner"};
  app.require_subcommand(1);
  std::string config_path;
  CliOverrides o;
  std::uint64_t seed = 0;
  std::string out_dir, case_name, method;

  const std::vector<std::pair<std::string, std::string>> verbs = {
      {"mesh-info", "print node, element and boundary-tag counts"},
      {"gen-data", "generate the Newton-snapshot training dataset"},
      {"train", "train the neural preconditioner"},
      {"solve", "solve one benchmark case with one method"},
      {"bench", "run the case x method benchmark matrix"},
  };
  for (const auto& [name, help] : verbs) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "experiment config (INI)")->required();
    sub->add_option("--seed", seed, "override the seed used by this command");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_flag("--strict-paper", o.strict_paper, "apply the preconditioner without the residual guard");
    if (name == "solve") {
      sub->add_option("--case", case_name, "benchmark case (I, II, III)");
      sub->add_option("--method", method, "newton-ls | newton-tr | np-newton-ls | np-newton-tr | ic-newton-ls");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string verb = sub->get_name();
  if (sub->count("--seed")) o.seed = seed;
  if (sub->count("--out")) o.out_dir = out_dir;
  if (verb == "solve" && sub->count("--case")) o.solve_case = case_name;
  if (verb == "solve" && sub->count("--method")) o.method = method;

  try {
    ExperimentConfig cfg = load_config(config_path);
    apply_overrides(cfg, o, verb);
    if (verb == "mesh-info") return cmd_mesh_info(cfg, out);
    if (verb == "gen-data") return cmd_gen_data(cfg, out);
    if (verb == "train") return cmd_train(cfg, out);
    if (verb == "solve") return cmd_solve(cfg, out);
    return cmd_bench(cfg, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n\n" << sub->help();
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace fpno
