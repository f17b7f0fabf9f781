// Copyright 2026 The cmfsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cmfsep/stft.hpp"

namespace cmfsep {

enum class BitDepth { kPcm16, kFloat32 };

struct WavFile {
  Signal samples;
  BitDepth bit_depth = BitDepth::kPcm16;
  std::uint16_t channels = 1;
};

/// Mono RIFF/WAVE, 16-bit PCM (scaled by 1/32768) or 32-bit IEEE float.
/// Throws DataError for missing files, other encodings and multichannel data.
WavFile read_wav(const std::filesystem::path& path);

/// Encodes `signal` as a RIFF/WAVE byte stream. Samples outside [-1, 1] are
/// clipped; the number clipped is stored in `clipped` when given.
std::vector<std::uint8_t> encode_wav(const Signal& signal, BitDepth bit_depth,
                                     std::size_t* clipped = nullptr);
WavFile decode_wav(const std::vector<std::uint8_t>& bytes,
                   const std::string& name = "<memory>");

/// Writes through a temporary file renamed into place. Returns the number of
/// clipped samples. Empty signals are rejected.
std::size_t write_wav(const std::filesystem::path& path, const Signal& signal,
                      BitDepth bit_depth);

/// Write `bytes` to `path` via a sibling temp file and rename, so `path` is
/// either untouched or complete.
void write_file_atomic(const std::filesystem::path& path,
                       const std::vector<std::uint8_t>& bytes);
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& text);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

}  // namespace cmfsep
