#include "fpno/training/trainer.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "fpno/errors.hpp"
#include "fpno/problems/factory.hpp"
#include "fpno/solvers/report.hpp"
#include "fpno/training/loss.hpp"

namespace fpno {

SnapshotTensors build_tensors(const Dataset& data, const std::vector<std::size_t>& group_ids) {
  auto mesh = std::make_shared<const Mesh>(build_unit_square_mesh(data.mesh));
  const std::size_t n = data.num_snapshots(group_ids);
  SnapshotTensors t;
  if (group_ids.empty()) return t;
  const auto& first = data.groups.at(group_ids.front());
  const Eigen::Index ndof = first.reference.size();
  const Eigen::Index nz = first.zeta.size();
  const auto cols = static_cast<Eigen::Index>(n);
  t.u.resize(ndof, cols);
  t.r_unit.resize(ndof, cols);
  t.r_norm.resize(cols);
  t.zeta.resize(nz, cols);
  t.ref.resize(ndof, cols);

  Eigen::Index col = 0;
  for (std::size_t id : group_ids) {
    const SnapshotGroup& g = data.groups.at(id);
    const auto problem = make_problem(data.problem, mesh, g.zeta);
    const DofMap& dm = problem->dofmap();
    if (dm.num_dofs() != ndof) throw DimensionError("snapshot size does not match the dataset mesh");
    if (t.constrained.empty()) t.constrained = dm.constrained_dofs();
    for (const Vec& u : g.iterates) {
      const Vec r = dm.expand_zero(problem->residual(dm.restrict_free(u)));
      const double rn = norm2(r);
      t.u.col(col) = u;
      t.r_norm[col] = rn;
      t.r_unit.col(col) = rn > 0.0 ? Vec(r / rn) : Vec::Zero(ndof);
      t.zeta.col(col) = g.zeta;
      t.ref.col(col) = g.reference;
      ++col;
    }
  }
  return t;
}

namespace {

Matrix gather(const Matrix& m, const std::vector<Eigen::Index>& idx) {
  Matrix out(m.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = m.col(idx[j]);
  return out;
}

Vec gather(const Vec& v, const std::vector<Eigen::Index>& idx) {
  Vec out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) out[static_cast<Eigen::Index>(j)] = v[idx[j]];
  return out;
}

void reset_constrained(Matrix& pred, const Matrix& u, const std::vector<std::int64_t>& constrained) {
  for (std::int64_t k : constrained) pred.row(k) = u.row(k);
}

double validation_error(const FpnoModel& model, const SnapshotTensors& t) {
  constexpr Eigen::Index kChunk = 512;
  double sum = 0.0;
  for (Eigen::Index b = 0; b < t.size(); b += kChunk) {
    const Eigen::Index n = std::min(kChunk, t.size() - b);
    const Matrix pred = predict_snapshots(model, t, b, n);
    sum += mean_rel_l2(pred, t.ref.middleCols(b, n)) * static_cast<double>(n);
  }
  return sum / static_cast<double>(t.size());
}

}  // namespace

Matrix predict_snapshots(const FpnoModel& model, const SnapshotTensors& t, Eigen::Index begin, Eigen::Index count) {
  const Matrix u = t.u.middleCols(begin, count);
  Matrix pred = model.predict(u, t.r_unit.middleCols(begin, count), t.r_norm.segment(begin, count),
                              t.zeta.middleCols(begin, count));
  reset_constrained(pred, u, t.constrained);
  return pred;
}

bool EarlyStopping::update(double value) {
  if (value < best_) {
    best_ = value;
    since_best_ = 0;
    return false;
  }
  ++since_best_;
  return since_best_ >= patience_;
}

TrainResult train(FpnoModel& model, const Dataset& data, const TrainConfig& cfg,
                  const std::function<void(const EpochRecord&)>& on_epoch) {
  if (data.train_groups.empty()) throw ConfigError("training split is empty");
  if (cfg.batch_size < 1 || cfg.max_epochs < 1 || cfg.patience < 1) {
    throw ConfigError("batch size, epochs and patience must be positive");
  }
  if (!(data.mesh == model.architecture().mesh) || data.problem != model.architecture().problem) {
    throw ConfigError("dataset and model were built for different meshes or problems");
  }
  const SnapshotTensors tr = build_tensors(data, data.train_groups);
  const SnapshotTensors va =
      data.validation_groups.empty() ? SnapshotTensors{} : build_tensors(data, data.validation_groups);
  const SnapshotTensors& val = data.validation_groups.empty() ? tr : va;
  if (cfg.batch_size > tr.size()) throw ConfigError("batch size exceeds the number of training snapshots");

  const auto start = std::chrono::steady_clock::now();
  TrainResult result;
  Vec params = model.params();
  Vec best = params;
  result.best_val_rel_l2 = validation_error(model, val);
  AdamWState opt(model.num_params(), cfg.optimizer);
  EarlyStopping stopper(cfg.patience);
  stopper.update(result.best_val_rel_l2);

  std::mt19937_64 rng(cfg.shuffle_seed);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(tr.size()));
  std::iota(order.begin(), order.end(), 0);
  Vec grad(model.num_params());

  result.stop_reason = "max_epochs";
  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    bool failed = false;
    for (std::size_t b = 0; b < order.size(); b += static_cast<std::size_t>(cfg.batch_size)) {
      const std::vector<Eigen::Index> idx(order.begin() + static_cast<std::ptrdiff_t>(b),
                                          order.begin() + static_cast<std::ptrdiff_t>(
                                                              std::min(order.size(), b + cfg.batch_size)));
      const Matrix u = gather(tr.u, idx);
      const Matrix ref = gather(tr.ref, idx);
      FpnoModel::Tape tape;
      Matrix pred = model.predict(u, gather(tr.r_unit, idx), gather(tr.r_norm, idx), gather(tr.zeta, idx), tape);
      reset_constrained(pred, u, tr.constrained);
      const double loss = rel_mse_loss(pred, ref);
      if (!std::isfinite(loss)) {
        failed = true;
        break;
      }
      loss_sum += loss * static_cast<double>(idx.size());
      Matrix dpred = rel_mse_grad(pred, ref);
      for (std::int64_t k : tr.constrained) dpred.row(k).setZero();
      grad.setZero();
      model.backward(tape, dpred, grad);
      try {
        adamw_step(opt, params, grad);
      } catch (const OptStepError&) {
        failed = true;
        break;
      }
      model.set_params(params);
    }
    if (failed) {
      result.aborted = true;
      result.stop_reason = "non-finite loss";
      break;
    }
    EpochRecord rec{epoch, loss_sum / static_cast<double>(tr.size()), validation_error(model, val)};
    result.history.push_back(rec);
    if (on_epoch) on_epoch(rec);
    if (rec.val_rel_l2 < result.best_val_rel_l2) {
      result.best_val_rel_l2 = rec.val_rel_l2;
      result.best_epoch = epoch;
      best = params;
    }
    if (stopper.update(rec.val_rel_l2)) {
      result.stop_reason = "patience";
      break;
    }
    if (cfg.max_seconds > 0.0 &&
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() > cfg.max_seconds) {
      result.stop_reason = "time limit";
      break;
    }
  }
  model.set_params(best);
  return result;
}

void write_history_csv(const std::string& path, const std::vector<EpochRecord>& history) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  os << "epoch,train_loss,val_rel_l2\n";
  for (const auto& h : history) {
    os << h.epoch << ',' << format_double(h.train_loss) << ',' << format_double(h.val_rel_l2) << '\n';
  }
}

}  // namespace fpno
