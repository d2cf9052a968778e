#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fpno/linalg/vector_ops.hpp"
#include "fpno/nn/activations.hpp"

namespace fpno {

enum class Activation { Gelu, Linear, Softmax, Tanh };
enum class BlockKind { Dense, SeResidual, Residual };

/// Shape record of one block.
///  Dense:      y = act(W x + b),                       W: out x in
///  SeResidual: h = gelu(W x + b), g = softmax(W2 gelu(W1 h + b1) + b2),
///              y = x + g * (width * h)                 (in == out, hidden = in / r)
///  Residual:   y = x + gelu(W x + b)                   (in == out)
struct BlockSpec {
  BlockKind kind = BlockKind::Dense;
  int in = 0;
  int out = 0;
  Activation act = Activation::Linear;
  int hidden = 0;

  bool operator==(const BlockSpec&) const = default;
};

/// Intermediate values of one recorded forward pass.
struct Tape {
  std::vector<std::vector<Matrix>> blocks;
  bool recorded() const { return !blocks.empty(); }
};

/// Feed-forward network over column batches (one sample per column). All
/// parameters live in one flat vector; weight matrices are stored row-major.
class Network {
 public:
  Network() = default;
  explicit Network(std::vector<BlockSpec> specs);

  const std::vector<BlockSpec>& specs() const { return specs_; }
  int input_dim() const;
  int output_dim() const;
  std::int64_t num_params() const { return params_.size(); }

  Vec& params() { return params_; }
  const Vec& params() const { return params_; }

  /// Kaiming fan-in normal weights, zero biases. With `zero_last`, the
  /// final block's parameters are set to zero.
  void initialize(std::uint64_t seed, bool zero_last = false);

  Matrix forward(const Matrix& x) const;
  Matrix forward(const Matrix& x, Tape& tape) const;

  /// Adds parameter gradients into `grad` and returns the input gradient.
  /// Throws StateError when `tape` holds no recorded pass.
  Matrix backward(const Tape& tape, const Matrix& dy, Vec& grad) const;

 private:
  std::vector<BlockSpec> specs_;
  std::vector<std::int64_t> offsets_;
  Vec params_;
};

/// SE-ResNet[w0, w1, ..., wk]: dense w0 -> w1 (GELU), one SE residual block
/// per repeated width, final linear layer to wk.
Network make_se_resnet(const std::vector<int>& widths, int reduction = 4);
/// ResNet[w0, ..., wk]: same layout with plain residual blocks.
Network make_resnet(const std::vector<int>& widths);

std::string to_string(Activation act);
std::string to_string(BlockKind kind);

}  // namespace fpno
