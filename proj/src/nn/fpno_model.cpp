#include "fpno/nn/fpno_model.hpp"

#include <cmath>

#include <fmt/format.h>

#include "fpno/errors.hpp"

namespace fpno {

namespace {

int components_of(ProblemKind kind) { return kind == ProblemKind::NonlinearPoisson ? 1 : 2; }

std::vector<int> widths(int in, int width, int hidden, int out) {
  std::vector<int> w{in};
  for (int i = 0; i < hidden; ++i) w.push_back(width);
  w.push_back(out);
  return w;
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace

FpnoArchitecture FpnoArchitecture::make(ProblemKind problem, const MeshDescriptor& mesh, int width, int latent,
                                        int depth) {
  if (width <= 0 || latent <= 0 || depth < 2) throw ConfigError("FPNO widths must be positive and depth >= 2");
  const Mesh m = build_unit_square_mesh(mesh);
  FpnoArchitecture a;
  a.problem = problem;
  a.mesh = mesh;
  a.components = components_of(problem);
  a.latent = latent;
  const int ndof = static_cast<int>(m.num_nodes()) * a.components;
  a.zeta_dim = problem == ProblemKind::NonlinearPoisson ? static_cast<int>(m.num_nodes()) : 1;
  a.scaling = widths(ndof, width, depth - 1, 1);
  a.branch = widths(ndof, width, depth, a.components * latent);
  a.feature = widths(a.zeta_dim, width, depth, latent);
  a.trunk = widths(2, width, depth, latent);
  return a;
}

FpnoModel::FpnoModel(const FpnoArchitecture& arch, std::uint64_t seed)
    : FpnoModel(arch, make_se_resnet(arch.scaling, arch.reduction),
                MioNet(make_se_resnet(arch.branch, arch.reduction), make_se_resnet(arch.feature, arch.reduction),
                       make_resnet(arch.trunk), arch.components)) {
  scaling_.initialize(seed, /*zero_last=*/true);
  backbone_.branch().initialize(seed + 1);
  backbone_.feature().initialize(seed + 2);
  backbone_.trunk().initialize(seed + 3);
}

FpnoModel::FpnoModel(const FpnoArchitecture& arch, Network scaling, MioNet backbone)
    : arch_(arch),
      mesh_(std::make_shared<const Mesh>(build_unit_square_mesh(arch.mesh))),
      scaling_(std::move(scaling)),
      backbone_(std::move(backbone)) {
  const std::int64_t ndof = num_dofs();
  if (scaling_.input_dim() != ndof || scaling_.output_dim() != 1) {
    throw DimensionError(fmt::format("scaling net must map {} -> 1", ndof));
  }
  if (backbone_.branch().input_dim() != ndof) {
    throw DimensionError(fmt::format("branch input {} != {} training dofs", backbone_.branch().input_dim(), ndof));
  }
  if (backbone_.feature().input_dim() != arch_.zeta_dim) {
    throw DimensionError("feature branch input does not match the parameter dimension");
  }
  if (backbone_.components() != arch_.components) throw DimensionError("component count mismatch");
  coords_.resize(2, static_cast<Eigen::Index>(mesh_->num_nodes()));
  for (std::size_t k = 0; k < mesh_->num_nodes(); ++k) {
    coords_(0, k) = mesh_->nodes()[k].x;
    coords_(1, k) = mesh_->nodes()[k].y;
  }
}

std::int64_t FpnoModel::num_params() const {
  return scaling_.num_params() + backbone_.branch().num_params() + backbone_.feature().num_params() +
         backbone_.trunk().num_params();
}

Vec FpnoModel::params() const {
  Vec p(num_params());
  std::int64_t off = 0;
  for (const Network* net : {&scaling_, &backbone_.branch(), &backbone_.feature(), &backbone_.trunk()}) {
    p.segment(off, net->num_params()) = net->params();
    off += net->num_params();
  }
  return p;
}

void FpnoModel::set_params(const Vec& params) {
  if (params.size() != num_params()) throw DimensionError("parameter vector has the wrong size");
  std::int64_t off = 0;
  for (Network* net : {&scaling_, &backbone_.branch(), &backbone_.feature(), &backbone_.trunk()}) {
    net->params() = params.segment(off, net->num_params());
    off += net->num_params();
  }
}

void FpnoModel::check_inputs(const Matrix& u, const Matrix& r_unit, const Vec& r_norm, const Matrix& zeta) const {
  const Eigen::Index b = u.cols();
  if (u.rows() != num_dofs() || r_unit.rows() != num_dofs()) {
    throw DimensionError(fmt::format("FPNO expects {} dofs per sample", num_dofs()));
  }
  if (zeta.rows() != arch_.zeta_dim) throw DimensionError("FPNO parameter input has the wrong size");
  if (r_unit.cols() != b || r_norm.size() != b || zeta.cols() != b) {
    throw DimensionError("FPNO batch sizes differ between inputs");
  }
}

Matrix FpnoModel::predict(const Matrix& u, const Matrix& r_unit, const Vec& r_norm, const Matrix& zeta) const {
  Tape tape;
  return predict(u, r_unit, r_norm, zeta, tape);
}

Matrix FpnoModel::predict(const Matrix& u, const Matrix& r_unit, const Vec& r_norm, const Matrix& zeta,
                          Tape& tape) const {
  check_inputs(u, r_unit, r_norm, zeta);
  const Matrix s = scaling_.forward(r_unit, tape.scaling);
  tape.r_norm = r_norm;
  tape.eta.resize(u.cols());
  for (Eigen::Index b = 0; b < u.cols(); ++b) {
    tape.eta[b] = r_norm[b] == 0.0 ? 0.0 : std::tanh(r_norm[b] * s(0, b));
  }
  tape.correction = backbone_.forward(u, zeta, coords_, tape.backbone);
  Matrix out = u;
  for (Eigen::Index b = 0; b < u.cols(); ++b) {
    if (tape.eta[b] != 0.0) out.col(b) += tape.eta[b] * tape.correction.col(b);
  }
  return out;
}

void FpnoModel::backward(const Tape& tape, const Matrix& dpred, Vec& grad) const {
  if (!tape.scaling.recorded()) throw StateError("FPNO backward called without a recorded forward pass");
  if (grad.size() != num_params()) throw DimensionError("gradient buffer has the wrong size");
  const Eigen::Index batch = tape.eta.size();
  if (dpred.rows() != num_dofs() || dpred.cols() != batch) throw DimensionError("FPNO output gradient shape");

  Matrix ds(1, batch);
  Matrix dcorr(dpred.rows(), batch);
  for (Eigen::Index b = 0; b < batch; ++b) {
    const double eta = tape.eta[b];
    dcorr.col(b) = eta * dpred.col(b);
    const double deta = dpred.col(b).dot(tape.correction.col(b));
    ds(0, b) = tape.r_norm[b] == 0.0 ? 0.0 : deta * (1.0 - eta * eta) * tape.r_norm[b];
  }

  Vec gs = Vec::Zero(scaling_.num_params());
  Vec gb = Vec::Zero(backbone_.branch().num_params());
  Vec gf = Vec::Zero(backbone_.feature().num_params());
  Vec gt = Vec::Zero(backbone_.trunk().num_params());
  scaling_.backward(tape.scaling, ds, gs);
  backbone_.backward(tape.backbone, dcorr, gb, gf, gt);
  std::int64_t off = 0;
  for (const Vec* g : {&gs, &gb, &gf, &gt}) {
    grad.segment(off, g->size()) += *g;
    off += g->size();
  }
}

BoundFpno::BoundFpno(std::shared_ptr<const FpnoModel> model, const Mesh& solve_mesh) : model_(std::move(model)) {
  if (!(solve_mesh.descriptor() == model_->mesh().descriptor())) {
    transfer_ = build_transfer(model_->mesh(), solve_mesh);
  }
}

Vec BoundFpno::apply(const NonlinearProblem& problem, const Vec& u_free, const Vec& r_free) const {
  const FpnoModel& m = *model_;
  if (problem.kind() != m.architecture().problem) throw Unsupported("model was trained for another problem");
  if (u_free.size() != problem.size() || r_free.size() != problem.size()) {
    throw DimensionError("fpno_apply: vector sizes do not match the problem");
  }
  const double r_norm = norm2(r_free);
  if (r_norm == 0.0) return u_free;

  const DofMap& dm = problem.dofmap();
  const int d = dm.components();
  const Vec u_full = dm.expand(u_free);
  const Vec r_unit = dm.expand_zero(r_free) / r_norm;
  Vec zeta = problem.zeta();

  Vec u_in = u_full;
  Vec r_in = r_unit;
  if (transfer_) {
    u_in = transfer_->restrict_to_coarse(u_full, d);
    r_in = transfer_->restrict_to_coarse(r_unit, d);
    if (problem.zeta_is_nodal()) zeta = transfer_->restrict_to_coarse(zeta, 1);
  }
  if (u_in.size() != m.num_dofs()) throw DimensionError("fpno_apply: solve mesh does not match the model");

  const double s = m.scaling().forward(r_in)(0, 0);
  const Matrix g = m.backbone().forward(u_in, zeta, m.coords());
  if (!std::isfinite(s) || !all_finite(g)) throw ModelNaN("FPNO produced a non-finite value");
  const double eta = std::tanh(r_norm * s);

  const Vec corr = transfer_ ? transfer_->prolong(g.col(0), d) : Vec(g.col(0));
  Vec v = u_full + eta * corr;
  dm.apply_prescribed(v);
  return dm.restrict_free(v);
}

Vec fpno_apply(const BoundFpno& fpno, const NonlinearProblem& problem, const Vec& u_free) {
  return fpno.apply(problem, u_free, problem.residual(u_free));
}

}  // namespace fpno
