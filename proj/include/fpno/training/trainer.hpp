#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fpno/nn/fpno_model.hpp"
#include "fpno/training/adamw.hpp"
#include "fpno/training/dataset.hpp"

namespace fpno {

/// Column-stacked training inputs for a set of snapshots.
struct SnapshotTensors {
  Matrix u;       // iterates (full dofs)
  Matrix r_unit;  // F(u) / |F(u)|, zero at constrained dofs
  Vec r_norm;
  Matrix zeta;
  Matrix ref;     // reference solutions
  std::vector<std::int64_t> constrained;  // dof indices reset to u after prediction

  Eigen::Index size() const { return u.cols(); }
};

/// Recomputes residuals of every snapshot of the given groups.
SnapshotTensors build_tensors(const Dataset& data, const std::vector<std::size_t>& group_ids);

/// Model prediction with Dirichlet rows copied back from the input.
Matrix predict_snapshots(const FpnoModel& model, const SnapshotTensors& t, Eigen::Index begin, Eigen::Index count);

/// Stops once `patience` consecutive updates fail to improve the best value.
class EarlyStopping {
 public:
  explicit EarlyStopping(int patience) : patience_(patience) {}
  /// Returns true when training should stop after this value.
  bool update(double value);
  double best() const { return best_; }
  int since_best() const { return since_best_; }

 private:
  int patience_;
  double best_ = std::numeric_limits<double>::infinity();
  int since_best_ = 0;
};

struct TrainConfig {
  int batch_size = 100;
  int max_epochs = 5000;
  int patience = 1000;
  std::uint64_t shuffle_seed = 0;
  AdamWConfig optimizer;
  double max_seconds = 0.0;  // 0: no wall-clock limit
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double val_rel_l2 = 0.0;
};

struct TrainResult {
  std::vector<EpochRecord> history;
  int best_epoch = 0;
  double best_val_rel_l2 = 0.0;
  bool aborted = false;  // non-finite loss or gradient
  std::string stop_reason;
};

/// Minibatch AdamW on the relative MSE between the FPNO output and the
/// reference solution. The model is left holding the best-validation
/// parameters (also after an abort).
TrainResult train(FpnoModel& model, const Dataset& data, const TrainConfig& cfg,
                  const std::function<void(const EpochRecord&)>& on_epoch = {});

/// Columns epoch,train_loss,val_rel_l2.
void write_history_csv(const std::string& path, const std::vector<EpochRecord>& history);

}  // namespace fpno
