#pragma once

#include "fpno/nn/network.hpp"

namespace fpno {

/// Multi-input operator network. For sample b, node k and component c:
///   out[k * d + c] = sum_i B(u_b)[c * p + i] * Bf(zeta_b)[i] * T(x_k)[i]
class MioNet {
 public:
  MioNet() = default;
  MioNet(Network branch, Network feature, Network trunk, int components);

  int components() const { return components_; }
  int latent() const { return latent_; }

  const Network& branch() const { return branch_; }
  const Network& feature() const { return feature_; }
  const Network& trunk() const { return trunk_; }
  Network& branch() { return branch_; }
  Network& feature() { return feature_; }
  Network& trunk() { return trunk_; }

  struct Tape {
    ::fpno::Tape branch, feature, trunk;
    Matrix b, f, t;
  };

  /// u: branch inputs (one column per sample), zeta: feature inputs,
  /// coords: 2 x K node coordinates shared by the batch. Returns a
  /// (K * d) x batch matrix.
  Matrix forward(const Matrix& u, const Matrix& zeta, const Matrix& coords) const;
  Matrix forward(const Matrix& u, const Matrix& zeta, const Matrix& coords, Tape& tape) const;

  /// Accumulates into the three gradient buffers (sized like each network).
  void backward(const Tape& tape, const Matrix& dout, Vec& g_branch, Vec& g_feature, Vec& g_trunk) const;

  /// Fusion step alone, exposed for testing: b is (d * p) x batch, f is
  /// p x batch, t is p x K.
  static Matrix fuse(const Matrix& b, const Matrix& f, const Matrix& t, int components);

 private:
  Network branch_, feature_, trunk_;
  int components_ = 1;
  int latent_ = 0;
};

}  // namespace fpno
