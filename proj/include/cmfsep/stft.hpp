// Copyright 2026 The cmfsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cmfsep/tensor.hpp"

namespace cmfsep {

/// Rows are one-sided frequency bins (frame_len/2 + 1), columns are frames.
using ComplexSpectrogram = ComplexMatrix;

enum class Window : std::uint8_t { kSqrtHann = 0 };

struct StftConfig {
  std::size_t frame_len = 512;
  std::size_t hop = 256;
  Window window = Window::kSqrtHann;
  std::uint32_t sample_rate = 16000;

  std::size_t freq_bins() const { return frame_len / 2 + 1; }
  /// Throws std::invalid_argument unless frame_len is a power of two >= 2 and
  /// hop == frame_len / 2 (the sqrt-Hann COLA condition).
  void validate() const;

  friend bool operator==(const StftConfig&, const StftConfig&) = default;
};

struct Signal {
  std::vector<double> samples;
  std::uint32_t sample_rate = 16000;
};

bool is_power_of_two(std::size_t n);

/// Radix-2 transform. Forward is unscaled, inverse scales by 1/N.
std::vector<Complex> dft(std::span<const Complex> frame, bool inverse);
/// In-place variant of dft().
void fft_inplace(std::span<Complex> data, bool inverse);

/// Periodic sqrt-Hann analysis/synthesis window of length cfg.frame_len.
std::vector<double> make_window(const StftConfig& cfg);

/// Number of complete frames in a signal of `len` samples (0 if shorter than
/// one frame).
std::size_t frame_count(std::size_t len, const StftConfig& cfg);

ComplexSpectrogram stft(const Signal& signal, const StftConfig& cfg);

/// Weighted overlap-add synthesis. Output has (frames-1)*hop + frame_len
/// samples; samples in [hop, frames*hop) are covered by two frames and
/// reproduce the analyzed signal exactly.
Signal istft(const ComplexSpectrogram& spec, const StftConfig& cfg);

struct SampleRange {
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Fully overlapped interior for a spectrogram with `frames` columns.
SampleRange interior_range(std::size_t frames, const StftConfig& cfg);

}  // namespace cmfsep
