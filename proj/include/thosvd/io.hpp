#ifndef THOSVD_IO_HPP
#define THOSVD_IO_HPP

#include <string>

#include "thosvd/observation.hpp"
#include "thosvd/synthetic.hpp"
#include "thosvd/tensor.hpp"

namespace thosvd {

// Binary tensor format, little-endian:
//   "THOS"  u32 version=1  u32 N  N x u64 dims  numel x f64 payload
// Payload order is the lexicographic flat layout.
void save_tensor_binary(const DenseTensor& t, const std::string& path);
DenseTensor load_tensor_binary(const std::string& path);

// Text variant: first line "N m_1 ... m_N", then one value per line with
// 17 significant digits.
void save_tensor_text(const DenseTensor& t, const std::string& path);
DenseTensor load_tensor_text(const std::string& path);

// Mask format: first line "N m_1 ... m_N |Omega|", then one flat index per
// line, ascending.
void save_mask(const ObservationMask& mask, const std::string& path);
ObservationMask load_mask(const std::string& path);

// Sidecar manifest describing a generated instance.
void save_manifest(const GeneratorSpec& spec, const std::string& path);
GeneratorSpec load_manifest(const std::string& path);

} // namespace thosvd

#endif
