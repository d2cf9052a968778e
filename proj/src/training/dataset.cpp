#include "fpno/training/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "fpno/errors.hpp"
#include "fpno/problems/factory.hpp"
#include "fpno/training/binary_io.hpp"

namespace fpno {

namespace {

constexpr const char* kMagic = "FPNODATA";
constexpr std::uint32_t kVersion = 1;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index, std::uint64_t stream) {
  return splitmix64(splitmix64(splitmix64(base) ^ index) ^ stream);
}

std::size_t Dataset::num_snapshots() const {
  std::size_t n = 0;
  for (const auto& g : groups) n += g.iterates.size();
  return n;
}

std::size_t Dataset::num_snapshots(const std::vector<std::size_t>& group_ids) const {
  std::size_t n = 0;
  for (std::size_t id : group_ids) n += groups.at(id).iterates.size();
  return n;
}

Dataset generate_dataset(const DataGenConfig& cfg, const std::function<void(const std::string&)>& log) {
  if (cfg.num_guesses < 1) throw ConfigError("dataset needs at least one initial guess");
  auto mesh = std::make_shared<const Mesh>(build_unit_square_mesh(cfg.mesh));
  const int d = cfg.problem == ProblemKind::NonlinearPoisson ? 1 : 2;

  std::optional<GrfSampler> forcing;
  if (cfg.problem == ProblemKind::NonlinearPoisson) forcing.emplace(mesh->nodes(), cfg.forcing);
  const GrfSampler guess(mesh->nodes(), cfg.guess);

  Dataset data;
  data.problem = cfg.problem;
  data.mesh = cfg.mesh;
  for (int j = 0; j < cfg.num_guesses; ++j) {
    const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(j), 0);
    Vec zeta;
    if (forcing) {
      zeta = forcing->sample(derive_seed(seed, 0, 1));
    } else {
      std::mt19937_64 rng(derive_seed(seed, 0, 1));
      zeta = Vec::Constant(1, std::uniform_real_distribution<double>(cfg.top_lo, cfg.top_hi)(rng));
    }
    const auto problem = make_problem(cfg.problem, mesh, zeta);
    const DofMap& dm = problem->dofmap();

    Vec u0_full(dm.num_dofs());
    for (int c = 0; c < d; ++c) {
      const Vec g = guess.scaled_sample(derive_seed(seed, static_cast<std::uint64_t>(c), 2), cfg.guess_lo,
                                        cfg.guess_hi);
      for (std::size_t k = 0; k < mesh->num_nodes(); ++k) u0_full[static_cast<Eigen::Index>(k) * d + c] = g[k];
    }
    const Vec u0 = dm.restrict_free(u0_full);

    std::vector<Vec> iterates;
    const SolveResult res = newton_solve_with_solution(*problem, u0, cfg.solver, cfg.opts, &iterates);
    if (res.report.outcome != Outcome::Converged) {
      ++data.discarded;
      if (log) {
        log(fmt::format("group {} discarded: {} after {} iterations", j, to_string(res.report.outcome),
                        res.report.iterations));
      }
      continue;
    }
    SnapshotGroup g;
    g.seed = seed;
    g.zeta = std::move(zeta);
    for (const Vec& u : iterates) g.iterates.push_back(dm.expand(u));
    g.reference = g.iterates.back();
    data.groups.push_back(std::move(g));
  }
  if (2 * data.discarded > static_cast<std::size_t>(cfg.num_guesses)) {
    throw DataGenFailure(fmt::format("{} of {} initial guesses failed to converge", data.discarded, cfg.num_guesses));
  }
  split_groups(data, cfg.validation_fraction, derive_seed(cfg.seed, 0, 3));
  return data;
}

void split_groups(Dataset& data, double validation_fraction, std::uint64_t seed) {
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0)) {
    throw ConfigError("validation fraction must be in [0, 1)");
  }
  const std::size_t n = data.groups.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(order[i - 1], order[pick(rng)]);
  }
  std::size_t n_val = static_cast<std::size_t>(std::lround(validation_fraction * static_cast<double>(n)));
  if (n >= 2 && validation_fraction > 0.0) n_val = std::clamp<std::size_t>(n_val, 1, n - 1);
  data.validation_groups.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
  data.train_groups.assign(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());
  std::sort(data.validation_groups.begin(), data.validation_groups.end());
  std::sort(data.train_groups.begin(), data.train_groups.end());
}

void save_dataset(const std::string& path, const Dataset& data) {
  BinaryWriter w;
  w.u32(static_cast<std::uint32_t>(data.problem));
  w.mesh(data.mesh);
  w.u64(data.discarded);
  w.u64(data.groups.size());
  for (const auto& g : data.groups) {
    w.u64(g.seed);
    w.vec(g.zeta);
    w.vec(g.reference);
    w.u64(g.iterates.size());
    for (const Vec& u : g.iterates) w.vec(u);
  }
  for (const auto* ids : {&data.train_groups, &data.validation_groups}) {
    w.u64(ids->size());
    for (std::size_t id : *ids) w.u64(id);
  }
  write_container(path, kMagic, kVersion, w.data());
}

Dataset load_dataset(const std::string& path) {
  const std::string payload = read_container(path, kMagic, kVersion);
  BinaryReader r(payload);
  Dataset data;
  const std::uint32_t kind = r.u32();
  if (kind > 1) throw FormatError("unknown problem kind in dataset");
  data.problem = static_cast<ProblemKind>(kind);
  data.mesh = r.mesh();
  data.discarded = r.u64();
  const std::uint64_t n = r.u64();
  if (n > payload.size()) throw FormatError("corrupt group count");
  data.groups.resize(n);
  for (auto& g : data.groups) {
    g.seed = r.u64();
    g.zeta = r.vec();
    g.reference = r.vec();
    const std::uint64_t m = r.u64();
    if (m > payload.size()) throw FormatError("corrupt snapshot count");
    g.iterates.resize(m);
    for (Vec& u : g.iterates) u = r.vec();
  }
  for (auto* ids : {&data.train_groups, &data.validation_groups}) {
    const std::uint64_t k = r.u64();
    if (k > n) throw FormatError("corrupt split");
    ids->resize(k);
    for (auto& id : *ids) {
      id = r.u64();
      if (id >= n) throw FormatError("split index out of range");
    }
  }
  if (!r.at_end()) throw FormatError("trailing data in dataset payload");
  return data;
}

}  // namespace fpno
