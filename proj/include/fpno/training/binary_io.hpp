#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fpno/linalg/vector_ops.hpp"
#include "fpno/mesh/mesh.hpp"

namespace fpno {

/// Append-only byte buffer for the versioned model / dataset containers.
/// Values are stored in host byte order (little-endian on supported
/// platforms); doubles are raw IEEE-754 bits, so round trips are exact.
class BinaryWriter {
 public:
  void u8(std::uint8_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void i32(std::int32_t v);
  void f64(double v);
  void vec(const Vec& v);
  void ints(const std::vector<int>& v);
  void bytes(const std::string& s);
  void mesh(const MeshDescriptor& d);

  const std::string& data() const { return buf_; }

 private:
  std::string buf_;
};

/// Reader over a byte buffer. Every read past the end throws FormatError.
class BinaryReader {
 public:
  explicit BinaryReader(const std::string& data, std::size_t begin = 0, std::size_t end = std::string::npos);

  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  std::int32_t i32();
  double f64();
  Vec vec();
  std::vector<int> ints();
  std::string bytes(std::size_t n);
  MeshDescriptor mesh();

  bool at_end() const { return pos_ == end_; }
  std::size_t position() const { return pos_; }

 private:
  void need(std::size_t n) const;
  const std::string& data_;
  std::size_t pos_;
  std::size_t end_;
};

/// 64-bit FNV-1a hash, used as a payload checksum.
std::uint64_t fnv1a64(const char* data, std::size_t n);

/// Writes magic | version | payload | checksum(payload).
void write_container(const std::string& path, const std::string& magic, std::uint32_t version,
                     const std::string& payload);
/// Reads a container written by write_container; throws FormatError on a
/// wrong magic, version mismatch, truncation or checksum failure.
std::string read_container(const std::string& path, const std::string& magic, std::uint32_t version);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);

}  // namespace fpno
