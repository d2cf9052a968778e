#pragma once

#include <string>

#include "fpno/nn/fpno_model.hpp"

namespace fpno {

/// Versioned binary container: architecture (problem, training mesh,
/// widths), block specs of the four networks and their parameters as raw
/// 64-bit floats (weights row-major). Round trips are bit-exact.
std::string serialize_model(const FpnoModel& model);
FpnoModel deserialize_model(const std::string& payload);

void save_model(const std::string& path, const FpnoModel& model);
/// Throws FormatError on a version mismatch, truncation or corruption.
FpnoModel load_model(const std::string& path);

}  // namespace fpno
