// Copyright 2026 The cmfsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "cmfsep/stft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cmfsep {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void StftConfig::validate() const {
  if (frame_len < 2 || !is_power_of_two(frame_len)) {
    throw std::invalid_argument("frame_len must be a power of two >= 2, got " +
                                std::to_string(frame_len));
  }
  if (hop == 0 || hop > frame_len) {
    throw std::invalid_argument("hop must be in (0, frame_len], got " +
                                std::to_string(hop));
  }
  if (hop * 2 != frame_len) {
    throw std::invalid_argument(
        "sqrt-Hann synthesis requires hop = frame_len/2 (frame_len " +
        std::to_string(frame_len) + ", hop " + std::to_string(hop) + ")");
  }
  if (window != Window::kSqrtHann) {
    throw std::invalid_argument("unsupported window id " +
                                std::to_string(static_cast<int>(window)));
  }
  if (sample_rate == 0) throw std::invalid_argument("sample_rate must be > 0");
}

void fft_inplace(std::span<Complex> data, bool inverse) {
  const std::size_t n = data.size();
  if (!is_power_of_two(n)) {
    throw std::invalid_argument("fft length must be a power of two, got " +
                                std::to_string(n));
  }
  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const double theta = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
    for (std::size_t k = 0; k < half; ++k) {
      // direct twiddles; a running product accumulates error for large N
      const Complex w(std::cos(theta * static_cast<double>(k)),
                      std::sin(theta * static_cast<double>(k)));
      for (std::size_t start = 0; start < n; start += len) {
        const Complex u = data[start + k];
        const Complex v = data[start + k + half] * w;
        data[start + k] = u + v;
        data[start + k + half] = u - v;
      }
    }
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& v : data) v *= scale;
  }
}

std::vector<Complex> dft(std::span<const Complex> frame, bool inverse) {
  std::vector<Complex> out(frame.begin(), frame.end());
  fft_inplace(out, inverse);
  return out;
}

std::vector<double> make_window(const StftConfig& cfg) {
  std::vector<double> w(cfg.frame_len);
  const double n = static_cast<double>(cfg.frame_len);
  for (std::size_t i = 0; i < cfg.frame_len; ++i) {
    const double hann =
        0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / n);
    w[i] = std::sqrt(hann);
  }
  return w;
}

std::size_t frame_count(std::size_t len, const StftConfig& cfg) {
  if (len < cfg.frame_len) return 0;
  return (len - cfg.frame_len) / cfg.hop + 1;
}

ComplexSpectrogram stft(const Signal& signal, const StftConfig& cfg) {
  cfg.validate();
  const std::size_t frames = frame_count(signal.samples.size(), cfg);
  if (frames == 0) {
    throw std::invalid_argument("signal of " +
                                std::to_string(signal.samples.size()) +
                                " samples is shorter than one frame (" +
                                std::to_string(cfg.frame_len) + ")");
  }
  const auto window = make_window(cfg);
  const std::size_t bins = cfg.freq_bins();
  ComplexSpectrogram spec(bins, frames);
  std::vector<Complex> buf(cfg.frame_len);
  for (std::size_t f = 0; f < frames; ++f) {
    const std::size_t offset = f * cfg.hop;
    for (std::size_t i = 0; i < cfg.frame_len; ++i)
      buf[i] = Complex(signal.samples[offset + i] * window[i], 0.0);
    fft_inplace(buf, false);
    for (std::size_t k = 0; k < bins; ++k) spec(k, f) = buf[k];
  }
  return spec;
}

Signal istft(const ComplexSpectrogram& spec, const StftConfig& cfg) {
  cfg.validate();
  if (spec.rows() != cfg.freq_bins()) {
    throw std::invalid_argument("istft: spectrogram has " +
                                std::to_string(spec.rows()) +
                                " rows, config expects " +
                                std::to_string(cfg.freq_bins()));
  }
  const std::size_t frames = spec.cols();
  const std::size_t n = cfg.frame_len;
  const auto window = make_window(cfg);
  Signal out;
  out.sample_rate = cfg.sample_rate;
  out.samples.assign((frames - 1) * cfg.hop + n, 0.0);
  std::vector<Complex> buf(n);
  for (std::size_t f = 0; f < frames; ++f) {
    // rebuild the Hermitian full spectrum; DC and Nyquist imaginary parts are
    // dropped since a real frame cannot carry them
    buf[0] = Complex(spec(0, f).real(), 0.0);
    buf[n / 2] = Complex(spec(n / 2, f).real(), 0.0);
    for (std::size_t k = 1; k < n / 2; ++k) {
      buf[k] = spec(k, f);
      buf[n - k] = std::conj(spec(k, f));
    }
    fft_inplace(buf, true);
    const std::size_t offset = f * cfg.hop;
    for (std::size_t i = 0; i < n; ++i)
      out.samples[offset + i] += buf[i].real() * window[i];
  }
  return out;
}

SampleRange interior_range(std::size_t frames, const StftConfig& cfg) {
  if (frames < 2) return {0, 0};
  return {cfg.hop, frames * cfg.hop};
}

}  // namespace cmfsep
