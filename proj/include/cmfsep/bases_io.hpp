// Copyright 2026 The cmfsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "cmfsep/separation.hpp"

namespace cmfsep {

/// CMFB layout, all integers little-endian:
///
///   offset  size  field
///   0       4     magic "CMFB"
///   4       2     version (u16, = 1)
///   6       2     speaker_id length L (u16)
///   8       L     speaker_id, UTF-8
///   8+L     4     rank (u32)
///   12+L    4     freq_bins (u32), = frame_len/2 + 1
///   16+L    4     frame_len (u32)
///   20+L    4     hop (u32)
///   24+L    4     sample_rate (u32)
///   28+L    1     window_id (u8, 0 = sqrt-Hann)
///   29+L    ...   freq_bins x rank entries, row-major, each (real, imag) f64
inline constexpr std::uint16_t kBasesVersion = 1;

std::vector<std::uint8_t> encode_bases(const BasisSet& bases);
/// Throws DataError with distinct messages for a bad magic ("not a CMFB
/// file"), an unsupported version, a truncated header and a truncated payload.
BasisSet decode_bases(const std::vector<std::uint8_t>& bytes);

void save_bases(const std::filesystem::path& path, const BasisSet& bases);
BasisSet load_bases(const std::filesystem::path& path);

}  // namespace cmfsep
