#include "fpno/nn/mionet.hpp"

#include <fmt/format.h>

#include "fpno/errors.hpp"

namespace fpno {

MioNet::MioNet(Network branch, Network feature, Network trunk, int components)
    : branch_(std::move(branch)),
      feature_(std::move(feature)),
      trunk_(std::move(trunk)),
      components_(components),
      latent_(trunk_.output_dim()) {
  if (components_ < 1) throw DimensionError("MIONet needs at least one output component");
  if (trunk_.input_dim() != 2) throw DimensionError("trunk input must be 2D coordinates");
  if (feature_.output_dim() != latent_) {
    throw DimensionError(fmt::format("feature branch width {} != latent width {}", feature_.output_dim(), latent_));
  }
  if (branch_.output_dim() != components_ * latent_) {
    throw DimensionError(fmt::format("branch width {} != {} components x latent {}", branch_.output_dim(),
                                     components_, latent_));
  }
}

Matrix MioNet::fuse(const Matrix& b, const Matrix& f, const Matrix& t, int components) {
  const Eigen::Index p = t.rows();
  const Eigen::Index nodes = t.cols();
  if (f.rows() != p || b.rows() != components * p || b.cols() != f.cols()) {
    throw DimensionError("MIONet fusion: inconsistent latent shapes");
  }
  Matrix out(nodes * components, b.cols());
  for (int c = 0; c < components; ++c) {
    const Matrix h = b.middleRows(c * p, p).cwiseProduct(f);
    const Matrix oc = t.transpose() * h;
    for (Eigen::Index k = 0; k < nodes; ++k) out.row(k * components + c) = oc.row(k);
  }
  return out;
}

Matrix MioNet::forward(const Matrix& u, const Matrix& zeta, const Matrix& coords) const {
  Tape tape;
  return forward(u, zeta, coords, tape);
}

Matrix MioNet::forward(const Matrix& u, const Matrix& zeta, const Matrix& coords, Tape& tape) const {
  if (u.cols() != zeta.cols()) throw DimensionError("MIONet: branch and feature batch sizes differ");
  tape.b = branch_.forward(u, tape.branch);
  tape.f = feature_.forward(zeta, tape.feature);
  tape.t = trunk_.forward(coords, tape.trunk);
  return fuse(tape.b, tape.f, tape.t, components_);
}

void MioNet::backward(const Tape& tape, const Matrix& dout, Vec& g_branch, Vec& g_feature,
                      Vec& g_trunk) const {
  if (!tape.branch.recorded()) throw StateError("MIONet backward called without a recorded forward pass");
  const Eigen::Index p = latent_;
  const Eigen::Index nodes = tape.t.cols();
  const Eigen::Index batch = tape.b.cols();
  if (dout.rows() != nodes * components_ || dout.cols() != batch) {
    throw DimensionError("MIONet backward: output gradient shape mismatch");
  }
  Matrix db(components_ * p, batch);
  Matrix df = Matrix::Zero(p, batch);
  Matrix dt = Matrix::Zero(p, nodes);
  Matrix doc(nodes, batch);
  for (int c = 0; c < components_; ++c) {
    for (Eigen::Index k = 0; k < nodes; ++k) doc.row(k) = dout.row(k * components_ + c);
    const auto bc = tape.b.middleRows(c * p, p);
    const Matrix h = bc.cwiseProduct(tape.f);
    const Matrix dh = tape.t * doc;
    dt.noalias() += h * doc.transpose();
    db.middleRows(c * p, p) = dh.cwiseProduct(tape.f);
    df += dh.cwiseProduct(bc);
  }
  branch_.backward(tape.branch, db, g_branch);
  feature_.backward(tape.feature, df, g_feature);
  trunk_.backward(tape.trunk, dt, g_trunk);
}

}  // namespace fpno
