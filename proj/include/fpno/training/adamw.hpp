#pragma once

#include <cstdint>

#include "fpno/linalg/vector_ops.hpp"

namespace fpno {

struct AdamWConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 5e-4;
};

/// AdamW with decoupled weight decay:
///   p <- p (1 - lr wd);  m, v <- moment updates;
///   p <- p - lr mhat / (sqrt(vhat) + eps)
struct AdamWState {
  explicit AdamWState(std::int64_t n = 0, AdamWConfig config = {});

  AdamWConfig config;
  Vec m;
  Vec v;
  std::int64_t step = 0;
};

/// Throws OptStepError on a non-finite gradient (parameters untouched) and
/// DimensionError on a size mismatch.
void adamw_step(AdamWState& state, Vec& params, const Vec& grads);

}  // namespace fpno
