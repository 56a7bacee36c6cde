#pragma once

#include <iosfwd>
#include <string>

#include "aq/tensor.hpp"

namespace aq {

// PQT1 binary tensor file:
//   bytes 0..3   magic "PQT1"
//   bytes 4..19  four uint32 little-endian dims N, C, H, W
//   then         N*C*H*W float32 little-endian values, NCHW order
void write_pqt(std::ostream& os, const ActivationTensor& t);
void write_pqt(const std::string& path, const ActivationTensor& t);

ActivationTensor read_pqt(std::istream& is);
ActivationTensor read_pqt(const std::string& path);

} // namespace aq
