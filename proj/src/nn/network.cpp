#include "fpno/nn/network.hpp"

#include <cmath>
#include <random>

#include <fmt/format.h>

#include "fpno/errors.hpp"

namespace fpno {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstWeights = Eigen::Map<const RowMatrix>;
using Weights = Eigen::Map<RowMatrix>;
using ConstBias = Eigen::Map<const Eigen::VectorXd>;
using Bias = Eigen::Map<Eigen::VectorXd>;

// Layout of the dense layers inside one block: (rows, cols) per weight.
std::vector<std::pair<int, int>> layer_shapes(const BlockSpec& s) {
  switch (s.kind) {
    case BlockKind::Dense: return {{s.out, s.in}};
    case BlockKind::SeResidual: return {{s.in, s.in}, {s.hidden, s.in}, {s.in, s.hidden}};
    case BlockKind::Residual: return {{s.in, s.in}};
  }
  return {};
}

std::int64_t block_size(const BlockSpec& s) {
  std::int64_t n = 0;
  for (auto [r, c] : layer_shapes(s)) n += static_cast<std::int64_t>(r) * c + r;
  return n;
}

Matrix activate(Activation act, const Matrix& z) {
  switch (act) {
    case Activation::Gelu: return gelu(z);
    case Activation::Linear: return z;
    case Activation::Softmax: return softmax_columns(z);
    case Activation::Tanh: return z.array().tanh().matrix();
  }
  return z;
}

// dL/dz given dL/dy, the pre-activation z and the output y.
Matrix activate_backward(Activation act, const Matrix& z, const Matrix& y, const Matrix& dy) {
  switch (act) {
    case Activation::Gelu: return gelu_grad(z).cwiseProduct(dy);
    case Activation::Linear: return dy;
    case Activation::Softmax: {
      const Eigen::RowVectorXd inner = y.cwiseProduct(dy).colwise().sum();
      return y.cwiseProduct(dy - Matrix::Ones(y.rows(), 1) * inner);
    }
    case Activation::Tanh: return (1.0 - y.array().square()).matrix().cwiseProduct(dy);
  }
  return dy;
}

// View of one (W, b) pair inside the flat parameter vector.
struct Layer {
  const double* w;
  const double* b;
  int rows, cols;
  ConstWeights W() const { return ConstWeights(w, rows, cols); }
  ConstBias B() const { return ConstBias(b, rows); }
  Matrix apply(const Matrix& x) const { return (W() * x).colwise() + B(); }
};

std::vector<Layer> layers_of(const BlockSpec& s, const double* base) {
  std::vector<Layer> out;
  for (auto [r, c] : layer_shapes(s)) {
    out.push_back({base, base + static_cast<std::int64_t>(r) * c, r, c});
    base += static_cast<std::int64_t>(r) * c + r;
  }
  return out;
}

// Accumulates dW += dz x^T, db += rowsum(dz) into the gradient slot of `layer`.
void add_layer_grad(const Layer& layer, const double* param_base, double* grad_base, const Matrix& dz,
                    const Matrix& x) {
  const std::int64_t off = layer.w - param_base;
  Weights gw(grad_base + off, layer.rows, layer.cols);
  Bias gb(grad_base + off + static_cast<std::int64_t>(layer.rows) * layer.cols, layer.rows);
  gw.noalias() += dz * x.transpose();
  gb += dz.rowwise().sum();
}

}  // namespace

Network::Network(std::vector<BlockSpec> specs) : specs_(std::move(specs)) {
  if (specs_.empty()) throw DimensionError("network needs at least one block");
  std::int64_t total = 0;
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    const BlockSpec& s = specs_[i];
    if (s.in <= 0 || s.out <= 0) throw DimensionError("network block widths must be positive");
    if (s.kind != BlockKind::Dense && s.in != s.out) {
      throw DimensionError("residual blocks must preserve width");
    }
    if (s.kind == BlockKind::SeResidual && s.hidden <= 0) throw DimensionError("SE hidden width must be positive");
    if (i > 0 && specs_[i - 1].out != s.in) {
      throw DimensionError(fmt::format("block {} expects width {} but receives {}", i, s.in, specs_[i - 1].out));
    }
    offsets_.push_back(total);
    total += block_size(s);
  }
  params_ = Vec::Zero(total);
}

int Network::input_dim() const { return specs_.empty() ? 0 : specs_.front().in; }
int Network::output_dim() const { return specs_.empty() ? 0 : specs_.back().out; }

void Network::initialize(std::uint64_t seed, bool zero_last) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  params_.setZero();
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    if (zero_last && i + 1 == specs_.size()) break;
    double* base = params_.data() + offsets_[i];
    for (auto [r, c] : layer_shapes(specs_[i])) {
      const double stdev = std::sqrt(2.0 / c);
      for (std::int64_t k = 0; k < static_cast<std::int64_t>(r) * c; ++k) base[k] = stdev * normal(rng);
      base += static_cast<std::int64_t>(r) * c + r;
    }
  }
}

Matrix Network::forward(const Matrix& x) const {
  Tape scratch;
  return forward(x, scratch);
}

Matrix Network::forward(const Matrix& x, Tape& tape) const {
  if (x.rows() != input_dim()) {
    throw DimensionError(fmt::format("network input has {} rows, expected {}", x.rows(), input_dim()));
  }
  tape.blocks.assign(specs_.size(), {});
  Matrix cur = x;
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    const BlockSpec& s = specs_[i];
    const auto L = layers_of(s, params_.data() + offsets_[i]);
    auto& c = tape.blocks[i];
    switch (s.kind) {
      case BlockKind::Dense: {
        Matrix z = L[0].apply(cur);
        Matrix y = activate(s.act, z);
        c = {std::move(cur), std::move(z), y};
        cur = std::move(y);
        break;
      }
      case BlockKind::SeResidual: {
        Matrix z = L[0].apply(cur);
        Matrix h = gelu(z);
        Matrix a = L[1].apply(h);
        Matrix g1 = gelu(a);
        Matrix gate = softmax_columns(L[2].apply(g1));
        Matrix y = cur + static_cast<double>(s.in) * gate.cwiseProduct(h);
        c = {std::move(cur), std::move(z), std::move(h), std::move(a), std::move(g1), std::move(gate)};
        cur = std::move(y);
        break;
      }
      case BlockKind::Residual: {
        Matrix z = L[0].apply(cur);
        Matrix y = cur + gelu(z);
        c = {std::move(cur), std::move(z)};
        cur = std::move(y);
        break;
      }
    }
  }
  return cur;
}

Matrix Network::backward(const Tape& tape, const Matrix& dy, Vec& grad) const {
  if (!tape.recorded() || tape.blocks.size() != specs_.size()) {
    throw StateError("backward called without a recorded forward pass");
  }
  if (grad.size() != params_.size()) throw DimensionError("gradient buffer has the wrong size");
  if (dy.rows() != output_dim() || dy.cols() != tape.blocks.front()[0].cols()) {
    throw DimensionError("output gradient shape does not match the recorded pass");
  }
  const double* pbase = params_.data();
  double* gbase = grad.data();
  Matrix d = dy;
  for (std::size_t k = specs_.size(); k-- > 0;) {
    const BlockSpec& s = specs_[k];
    const auto L = layers_of(s, pbase + offsets_[k]);
    const auto& c = tape.blocks[k];
    switch (s.kind) {
      case BlockKind::Dense: {
        const Matrix dz = activate_backward(s.act, c[1], c[2], d);
        add_layer_grad(L[0], pbase, gbase, dz, c[0]);
        d = L[0].W().transpose() * dz;
        break;
      }
      case BlockKind::SeResidual: {
        const Matrix& x = c[0];
        const Matrix& z = c[1];
        const Matrix& h = c[2];
        const Matrix& a = c[3];
        const Matrix& g1 = c[4];
        const Matrix& gate = c[5];
        const double w = static_cast<double>(s.in);
        const Matrix dgate = w * d.cwiseProduct(h);
        Matrix dh = w * d.cwiseProduct(gate);
        const Matrix dc = activate_backward(Activation::Softmax, Matrix(), gate, dgate);
        add_layer_grad(L[2], pbase, gbase, dc, g1);
        const Matrix da = gelu_grad(a).cwiseProduct(L[2].W().transpose() * dc);
        add_layer_grad(L[1], pbase, gbase, da, h);
        dh.noalias() += L[1].W().transpose() * da;
        const Matrix dz = gelu_grad(z).cwiseProduct(dh);
        add_layer_grad(L[0], pbase, gbase, dz, x);
        d += L[0].W().transpose() * dz;
        break;
      }
      case BlockKind::Residual: {
        const Matrix dz = gelu_grad(c[1]).cwiseProduct(d);
        add_layer_grad(L[0], pbase, gbase, dz, c[0]);
        d += L[0].W().transpose() * dz;
        break;
      }
    }
  }
  return d;
}

namespace {

Network make_stack(const std::vector<int>& widths, BlockKind inner, int reduction) {
  if (widths.size() < 2) throw DimensionError("a network needs at least input and output widths");
  std::vector<BlockSpec> specs;
  if (widths.size() == 2) {
    specs.push_back({BlockKind::Dense, widths[0], widths[1], Activation::Linear, 0});
    return Network(specs);
  }
  specs.push_back({BlockKind::Dense, widths[0], widths[1], Activation::Gelu, 0});
  for (std::size_t i = 1; i + 2 < widths.size(); ++i) {
    const int a = widths[i];
    const int b = widths[i + 1];
    if (a == b) {
      const int hidden = inner == BlockKind::SeResidual ? std::max(1, a / reduction) : 0;
      specs.push_back({inner, a, a, Activation::Linear, hidden});
    } else {
      specs.push_back({BlockKind::Dense, a, b, Activation::Gelu, 0});
    }
  }
  specs.push_back({BlockKind::Dense, widths[widths.size() - 2], widths.back(), Activation::Linear, 0});
  return Network(specs);
}

}  // namespace

Network make_se_resnet(const std::vector<int>& widths, int reduction) {
  if (reduction <= 0) throw DimensionError("SE reduction must be positive");
  return make_stack(widths, BlockKind::SeResidual, reduction);
}

Network make_resnet(const std::vector<int>& widths) { return make_stack(widths, BlockKind::Residual, 1); }

std::string to_string(Activation act) {
  switch (act) {
    case Activation::Gelu: return "gelu";
    case Activation::Linear: return "linear";
    case Activation::Softmax: return "softmax";
    case Activation::Tanh: return "tanh";
  }
  return "?";
}

std::string to_string(BlockKind kind) {
  switch (kind) {
    case BlockKind::Dense: return "dense";
    case BlockKind::SeResidual: return "se_residual";
    case BlockKind::Residual: return "residual";
  }
  return "?";
}

}  // namespace fpno
