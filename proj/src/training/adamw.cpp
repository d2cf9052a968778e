#include "fpno/training/adamw.hpp"

#include <cmath>

#include "fpno/errors.hpp"

namespace fpno {

AdamWState::AdamWState(std::int64_t n, AdamWConfig cfg) : config(cfg), m(Vec::Zero(n)), v(Vec::Zero(n)) {}

void adamw_step(AdamWState& state, Vec& params, const Vec& grads) {
  if (params.size() != grads.size() || params.size() != state.m.size()) {
    throw DimensionError("adamw_step: parameter, gradient and state sizes differ");
  }
  if (!grads.allFinite()) throw OptStepError("non-finite gradient");
  const AdamWConfig& c = state.config;
  ++state.step;
  const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.step));
  params *= 1.0 - c.lr * c.weight_decay;
  state.m = c.beta1 * state.m + (1.0 - c.beta1) * grads;
  state.v = c.beta2 * state.v + (1.0 - c.beta2) * grads.cwiseProduct(grads);
  params.array() -= c.lr * (state.m.array() / bc1) / ((state.v.array() / bc2).sqrt() + c.eps);
}

}  // namespace fpno
