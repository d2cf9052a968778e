#include "fpno/training/model_io.hpp"

#include "fpno/errors.hpp"
#include "fpno/training/binary_io.hpp"

namespace fpno {

namespace {

constexpr const char* kMagic = "FPNOMODL";
constexpr std::uint32_t kVersion = 1;

void put_network(BinaryWriter& w, const Network& net) {
  w.u64(net.specs().size());
  for (const BlockSpec& s : net.specs()) {
    w.u32(static_cast<std::uint32_t>(s.kind));
    w.i32(s.in);
    w.i32(s.out);
    w.u32(static_cast<std::uint32_t>(s.act));
    w.i32(s.hidden);
  }
  w.vec(net.params());
}

Network get_network(BinaryReader& r) {
  const std::uint64_t n = r.u64();
  if (n == 0 || n > 4096) throw FormatError("corrupt block count");
  std::vector<BlockSpec> specs(n);
  for (auto& s : specs) {
    const std::uint32_t kind = r.u32();
    s.in = r.i32();
    s.out = r.i32();
    const std::uint32_t act = r.u32();
    s.hidden = r.i32();
    if (kind > 2 || act > 3) throw FormatError("unknown block kind or activation");
    s.kind = static_cast<BlockKind>(kind);
    s.act = static_cast<Activation>(act);
  }
  Network net;
  try {
    net = Network(specs);
  } catch (const DimensionError& e) {
    throw FormatError(std::string("inconsistent network shapes: ") + e.what());
  }
  Vec p = r.vec();
  if (p.size() != net.num_params()) throw FormatError("parameter count does not match the architecture");
  net.params() = std::move(p);
  return net;
}

}  // namespace

std::string serialize_model(const FpnoModel& model) {
  const FpnoArchitecture& a = model.architecture();
  BinaryWriter w;
  w.u32(static_cast<std::uint32_t>(a.problem));
  w.mesh(a.mesh);
  w.i32(a.components);
  w.i32(a.zeta_dim);
  w.i32(a.latent);
  w.i32(a.reduction);
  for (const auto* widths : {&a.scaling, &a.branch, &a.feature, &a.trunk}) w.ints(*widths);
  put_network(w, model.scaling());
  put_network(w, model.backbone().branch());
  put_network(w, model.backbone().feature());
  put_network(w, model.backbone().trunk());
  return w.data();
}

FpnoModel deserialize_model(const std::string& payload) {
  BinaryReader r(payload);
  FpnoArchitecture a;
  const std::uint32_t kind = r.u32();
  if (kind > 1) throw FormatError("unknown problem kind in model");
  a.problem = static_cast<ProblemKind>(kind);
  a.mesh = r.mesh();
  a.components = r.i32();
  a.zeta_dim = r.i32();
  a.latent = r.i32();
  a.reduction = r.i32();
  for (auto* widths : {&a.scaling, &a.branch, &a.feature, &a.trunk}) *widths = r.ints();
  Network scaling = get_network(r);
  Network branch = get_network(r);
  Network feature = get_network(r);
  Network trunk = get_network(r);
  if (!r.at_end()) throw FormatError("trailing data in model payload");
  try {
    return FpnoModel(a, std::move(scaling), MioNet(std::move(branch), std::move(feature), std::move(trunk), a.components));
  } catch (const InvalidMesh& e) {
    throw FormatError(std::string("invalid training mesh: ") + e.what());
  } catch (const DimensionError& e) {
    throw FormatError(std::string("inconsistent model: ") + e.what());
  }
}

void save_model(const std::string& path, const FpnoModel& model) {
  write_container(path, kMagic, kVersion, serialize_model(model));
}

FpnoModel load_model(const std::string& path) { return deserialize_model(read_container(path, kMagic, kVersion)); }

}  // namespace fpno
