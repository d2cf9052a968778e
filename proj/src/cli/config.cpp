#include "fpno/cli/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "fpno/errors.hpp"

namespace fpno {

namespace pt = boost::property_tree;

namespace {

const std::set<std::string> kKnownKeys = {
    "problem.kind",
    "mesh.train_n", "mesh.solve_n", "mesh.element", "mesh.hole",
    "grf.sigma", "grf.ell", "grf.case3_sigma",
    "data.guesses", "data.seed", "data.validation_fraction", "data.solver", "data.guess_lo", "data.guess_hi",
    "data.top_lo", "data.top_hi", "data.target_train_samples", "data.target_validation_samples",
    "model.width", "model.latent", "model.depth", "model.reduction", "model.seed",
    "train.batch_size", "train.max_epochs", "train.patience", "train.lr", "train.weight_decay",
    "train.shuffle_seed", "train.max_seconds",
    "solve.case", "solve.method", "solve.seed", "solve.max_iters", "solve.strict_paper", "solve.load_step",
    "solve.small_displacement", "solve.large_displacement",
    "bench.cases", "bench.methods", "bench.baseline",
    "output.dir", "output.dataset", "output.model",
};

template <typename T>
T get(const pt::ptree& tree, const std::string& key, T fallback) {
  const auto node = tree.get_child_optional(pt::ptree::path_type(key, '.'));
  if (!node) return fallback;
  std::string raw = boost::algorithm::trim_copy(node->data());
  if constexpr (std::is_same_v<T, std::string>) {
    return raw;
  } else if constexpr (std::is_same_v<T, bool>) {
    boost::algorithm::to_lower(raw);
    if (raw == "true" || raw == "1" || raw == "yes") return true;
    if (raw == "false" || raw == "0" || raw == "no") return false;
    throw ConfigError(fmt::format("{}: expected a boolean, got '{}'", key, raw));
  } else {
    std::istringstream is(raw);
    is.imbue(std::locale::classic());
    T v{};
    is >> v;
    if (!is || !is.eof()) throw ConfigError(fmt::format("{}: cannot parse '{}'", key, raw));
    return v;
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  boost::algorithm::split(out, s, boost::algorithm::is_any_of(","));
  for (auto& x : out) boost::algorithm::trim(x);
  out.erase(std::remove(out.begin(), out.end(), std::string()), out.end());
  return out;
}

InnerSolver parse_inner(const std::string& s) {
  if (s == "newton-ls") return InnerSolver::LineSearch;
  if (s == "newton-tr") return InnerSolver::TrustRegion;
  throw ConfigError("data.solver must be newton-ls or newton-tr, got '" + s + "'");
}

}  // namespace

MeshDescriptor ExperimentConfig::solve_mesh() const {
  MeshDescriptor d = train_mesh;
  d.n = solve_n;
  if (d.hole) d.mask_n = train_mesh.mask_level();
  return d;
}

std::string ExperimentConfig::dataset_path() const {
  return (std::filesystem::path(out_dir) / dataset_file).string();
}

std::string ExperimentConfig::model_path() const { return (std::filesystem::path(out_dir) / model_file).string(); }

ExperimentConfig parse_config(std::istream& is) {
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.message());
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("key '" + section + "' outside of a section");
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      if (!kKnownKeys.count(full)) throw ConfigError("unknown config key '" + full + "'");
    }
  }

  ExperimentConfig c;
  try {
    c.problem = parse_problem_kind(get<std::string>(tree, "problem.kind", "poisson"));
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  const bool poisson = c.problem == ProblemKind::NonlinearPoisson;

  c.train_mesh.n = get<int>(tree, "mesh.train_n", 16);
  c.solve_n = get<int>(tree, "mesh.solve_n", c.train_mesh.n);
  try {
    c.train_mesh.kind = parse_elem_kind(get<std::string>(tree, "mesh.element", poisson ? "p1" : "q1"));
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  c.train_mesh.convention = poisson ? TagConvention::Poisson : TagConvention::Elasticity;
  if (get<bool>(tree, "mesh.hole", false)) c.train_mesh.hole = EllipseHole{};
  if (c.train_mesh.n < 2 || c.solve_n < 2) throw ConfigError("mesh sizes must be at least 2");
  if (c.solve_n % c.train_mesh.n != 0) throw ConfigError("mesh.solve_n must be a multiple of mesh.train_n");
  if (poisson && c.train_mesh.kind != ElemKind::P1Tri) throw ConfigError("the Poisson problem uses p1 elements");
  if (!poisson && c.train_mesh.kind != ElemKind::Q1Quad) throw ConfigError("the elasticity problem uses q1 elements");

  DataGenConfig& d = c.data;
  d.problem = c.problem;
  d.mesh = c.train_mesh;
  d.forcing.sigma = get<double>(tree, "grf.sigma", 0.1);
  d.forcing.ell = get<double>(tree, "grf.ell", 0.1);
  c.case3_sigma = get<double>(tree, "grf.case3_sigma", 1.0);
  d.num_guesses = get<int>(tree, "data.guesses", 200);
  d.seed = get<std::uint64_t>(tree, "data.seed", 1);
  d.validation_fraction = get<double>(tree, "data.validation_fraction", 0.1);
  d.solver = parse_inner(get<std::string>(tree, "data.solver", "newton-ls"));
  d.guess_lo = get<double>(tree, "data.guess_lo", 1e-4);
  d.guess_hi = get<double>(tree, "data.guess_hi", 1e-2);
  d.top_lo = get<double>(tree, "data.top_lo", 0.0);
  d.top_hi = get<double>(tree, "data.top_hi", 2.0);
  c.target_train_samples = get<std::size_t>(tree, "data.target_train_samples", 0);
  c.target_validation_samples = get<std::size_t>(tree, "data.target_validation_samples", 0);
  if (!(d.forcing.sigma > 0.0) || !(d.forcing.ell > 0.0)) throw ConfigError("GRF sigma and ell must be positive");
  if (!(d.guess_lo > 0.0) || !(d.guess_hi >= d.guess_lo)) throw ConfigError("bad initial-guess scale range");

  c.width = get<int>(tree, "model.width", 64);
  c.latent = get<int>(tree, "model.latent", 64);
  c.depth = get<int>(tree, "model.depth", 3);
  c.reduction = get<int>(tree, "model.reduction", 4);
  c.model_seed = get<std::uint64_t>(tree, "model.seed", 7);
  if (c.width < 1 || c.latent < 1 || c.depth < 2 || c.reduction < 1) throw ConfigError("bad model widths");

  TrainConfig& t = c.train;
  t.batch_size = get<int>(tree, "train.batch_size", 100);
  t.max_epochs = get<int>(tree, "train.max_epochs", 5000);
  t.patience = get<int>(tree, "train.patience", 1000);
  t.optimizer.lr = get<double>(tree, "train.lr", 1e-4);
  t.optimizer.weight_decay = get<double>(tree, "train.weight_decay", 5e-4);
  t.shuffle_seed = get<std::uint64_t>(tree, "train.shuffle_seed", 3);
  t.max_seconds = get<double>(tree, "train.max_seconds", 0.0);

  c.solve_case = get<std::string>(tree, "solve.case", "I");
  c.method = get<std::string>(tree, "solve.method", "newton-ls");
  c.solve_seed = get<std::uint64_t>(tree, "solve.seed", 1000);
  c.solve.max_iters = get<int>(tree, "solve.max_iters", 200);
  c.solve.strict_paper = get<bool>(tree, "solve.strict_paper", false);
  c.load_step = get<double>(tree, "solve.load_step", 0.1);
  c.small_displacement = get<double>(tree, "solve.small_displacement", 0.1);
  c.large_displacement = get<double>(tree, "solve.large_displacement", 1.0);
  validate(c.solve);

  c.bench_cases = split_list(get<std::string>(tree, "bench.cases", poisson ? "I,II,III" : "I,II"));
  c.bench_methods = split_list(get<std::string>(tree, "bench.methods", "newton-ls,np-newton-ls"));
  c.bench_baseline = get<std::string>(tree, "bench.baseline", "newton-ls");

  c.out_dir = get<std::string>(tree, "output.dir", "out");
  c.dataset_file = get<std::string>(tree, "output.dataset", "dataset.bin");
  c.model_file = get<std::string>(tree, "output.model", "model.bin");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file '" + path + "'");
  return parse_config(is);
}

}  // namespace fpno
