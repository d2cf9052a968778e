#include "fpno/training/binary_io.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include <fmt/format.h>

#include "fpno/errors.hpp"

namespace fpno {

namespace {

template <typename T>
void put(std::string& buf, T v) {
  char raw[sizeof(T)];
  std::memcpy(raw, &v, sizeof(T));
  buf.append(raw, sizeof(T));
}

}  // namespace

void BinaryWriter::u8(std::uint8_t v) { put(buf_, v); }
void BinaryWriter::u32(std::uint32_t v) { put(buf_, v); }
void BinaryWriter::u64(std::uint64_t v) { put(buf_, v); }
void BinaryWriter::i32(std::int32_t v) { put(buf_, v); }
void BinaryWriter::f64(double v) { put(buf_, v); }

void BinaryWriter::vec(const Vec& v) {
  u64(static_cast<std::uint64_t>(v.size()));
  buf_.append(reinterpret_cast<const char*>(v.data()), static_cast<std::size_t>(v.size()) * sizeof(double));
}

void BinaryWriter::ints(const std::vector<int>& v) {
  u64(v.size());
  for (int x : v) i32(x);
}

void BinaryWriter::bytes(const std::string& s) { buf_.append(s); }

void BinaryWriter::mesh(const MeshDescriptor& d) {
  i32(d.n);
  u32(static_cast<std::uint32_t>(d.kind));
  u32(static_cast<std::uint32_t>(d.convention));
  u8(d.hole ? 1 : 0);
  if (d.hole) {
    f64(d.hole->center.x);
    f64(d.hole->center.y);
    f64(d.hole->semi_x);
    f64(d.hole->semi_y);
    i32(d.mask_n);
  }
}

BinaryReader::BinaryReader(const std::string& data, std::size_t begin, std::size_t end)
    : data_(data), pos_(begin), end_(std::min(end, data.size())) {}

void BinaryReader::need(std::size_t n) const {
  if (n > end_ - pos_) throw FormatError("unexpected end of data");
}

namespace {
template <typename T>
T take(const std::string& data, std::size_t& pos) {
  T v;
  std::memcpy(&v, data.data() + pos, sizeof(T));
  pos += sizeof(T);
  return v;
}
}  // namespace

std::uint8_t BinaryReader::u8() { need(1); return take<std::uint8_t>(data_, pos_); }
std::uint32_t BinaryReader::u32() { need(4); return take<std::uint32_t>(data_, pos_); }
std::uint64_t BinaryReader::u64() { need(8); return take<std::uint64_t>(data_, pos_); }
std::int32_t BinaryReader::i32() { need(4); return take<std::int32_t>(data_, pos_); }
double BinaryReader::f64() { need(8); return take<double>(data_, pos_); }

Vec BinaryReader::vec() {
  const std::uint64_t n = u64();
  if (n > (end_ - pos_) / sizeof(double)) throw FormatError("vector length exceeds the remaining data");
  Vec v(static_cast<Eigen::Index>(n));
  std::memcpy(v.data(), data_.data() + pos_, n * sizeof(double));
  pos_ += n * sizeof(double);
  return v;
}

std::vector<int> BinaryReader::ints() {
  const std::uint64_t n = u64();
  if (n > (end_ - pos_) / 4) throw FormatError("list length exceeds the remaining data");
  std::vector<int> out(n);
  for (auto& x : out) x = i32();
  return out;
}

std::string BinaryReader::bytes(std::size_t n) {
  need(n);
  std::string s = data_.substr(pos_, n);
  pos_ += n;
  return s;
}

MeshDescriptor BinaryReader::mesh() {
  MeshDescriptor d;
  d.n = i32();
  const std::uint32_t kind = u32();
  const std::uint32_t conv = u32();
  if (kind > 1 || conv > 1) throw FormatError("bad mesh descriptor");
  d.kind = static_cast<ElemKind>(kind);
  d.convention = static_cast<TagConvention>(conv);
  const std::uint8_t has_hole = u8();
  if (has_hole > 1) throw FormatError("bad mesh descriptor");
  if (has_hole) {
    EllipseHole h;
    h.center.x = f64();
    h.center.y = f64();
    h.semi_x = f64();
    h.semi_y = f64();
    d.hole = h;
    d.mask_n = i32();
  }
  return d;
}

std::uint64_t fnv1a64(const char* data, std::size_t n) {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= 1099511628211ULL;
  }
  return h;
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw Error("failed writing '" + path + "'");
}

void write_container(const std::string& path, const std::string& magic, std::uint32_t version,
                     const std::string& payload) {
  BinaryWriter w;
  w.bytes(magic);
  w.u32(version);
  w.u64(payload.size());
  w.bytes(payload);
  w.u64(fnv1a64(payload.data(), payload.size()));
  write_file(path, w.data());
}

std::string read_container(const std::string& path, const std::string& magic, std::uint32_t version) {
  const std::string raw = read_file(path);
  BinaryReader r(raw);
  if (r.bytes(magic.size()) != magic) throw FormatError("'" + path + "' is not a " + magic + " file");
  const std::uint32_t found = r.u32();
  if (found != version) {
    throw FormatError(fmt::format("'{}' has format version {}, expected {}", path, found, version));
  }
  const std::uint64_t n = r.u64();
  std::string payload = r.bytes(n);
  const std::uint64_t sum = r.u64();
  if (!r.at_end()) throw FormatError("trailing bytes after payload");
  if (sum != fnv1a64(payload.data(), payload.size())) throw FormatError("checksum mismatch in '" + path + "'");
  return payload;
}

}  // namespace fpno
