// Copyright 2026 The cmfsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "cmfsep/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "cmfsep/errors.hpp"

namespace cmfsep {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t get_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int s = 0; s < 32; s += 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

bool tag_is(const std::uint8_t* p, const char* tag) {
  return std::memcmp(p, tag, 4) == 0;
}

}  // namespace

WavFile decode_wav(const std::vector<std::uint8_t>& bytes,
                   const std::string& name) {
  if (bytes.size() < 12 || !tag_is(bytes.data(), "RIFF") ||
      !tag_is(bytes.data() + 8, "WAVE")) {
    throw DataError(name + ": not a RIFF/WAVE file");
  }
  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const std::uint8_t* data = nullptr;
  std::size_t data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::size_t len = get_u32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t avail = bytes.size() - body;
    if (tag_is(chunk, "fmt ")) {
      if (len < 16 || avail < 16) throw DataError(name + ": short fmt chunk");
      format = get_u16(chunk + 8);
      channels = get_u16(chunk + 10);
      rate = get_u32(chunk + 12);
      bits = get_u16(chunk + 22);
      if (format == kFormatExtensible && len >= 40 && avail >= 40) {
        format = get_u16(chunk + 8 + 24);  // sub-format GUID starts with the tag
      }
      have_fmt = true;
    } else if (tag_is(chunk, "data")) {
      data = chunk + 8;
      data_len = std::min(len, avail);  // tolerate writers that leave size 0/huge
      break;
    }
    pos = body + len + (len & 1);
  }
  if (!have_fmt) throw DataError(name + ": missing fmt chunk");
  if (!data) throw DataError(name + ": missing data chunk");
  if (channels != 1) {
    throw DataError(name + ": " + std::to_string(channels) +
                    " channels; only mono is supported, downmix first");
  }

  WavFile wav;
  wav.channels = 1;
  wav.samples.sample_rate = rate;
  if (format == kFormatPcm && bits == 16) {
    wav.bit_depth = BitDepth::kPcm16;
    const std::size_t n = data_len / 2;
    wav.samples.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = static_cast<std::int16_t>(get_u16(data + 2 * i));
      wav.samples.samples[i] = static_cast<double>(v) / 32768.0;
    }
  } else if (format == kFormatFloat && bits == 32) {
    wav.bit_depth = BitDepth::kFloat32;
    const std::size_t n = data_len / 4;
    wav.samples.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      wav.samples.samples[i] = std::bit_cast<float>(get_u32(data + 4 * i));
  } else {
    throw DataError(name + ": unsupported encoding (format " +
                    std::to_string(format) + ", " + std::to_string(bits) +
                    " bits); expected pcm16 or float32");
  }
  return wav;
}

WavFile read_wav(const std::filesystem::path& path) {
  return decode_wav(read_file(path), path.string());
}

std::vector<std::uint8_t> encode_wav(const Signal& signal, BitDepth bit_depth,
                                     std::size_t* clipped) {
  if (signal.samples.empty()) throw DataError("refusing to write an empty signal");
  const bool pcm = bit_depth == BitDepth::kPcm16;
  const std::uint16_t bytes_per_sample = pcm ? 2 : 4;
  const auto data_len =
      static_cast<std::uint32_t>(signal.samples.size() * bytes_per_sample);

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_len);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_len);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, pcm ? kFormatPcm : kFormatFloat);
  put_u16(out, 1);
  put_u32(out, signal.sample_rate);
  put_u32(out, signal.sample_rate * bytes_per_sample);
  put_u16(out, bytes_per_sample);
  put_u16(out, static_cast<std::uint16_t>(bytes_per_sample * 8));
  put_tag(out, "data");
  put_u32(out, data_len);

  std::size_t n_clipped = 0;
  for (double x : signal.samples) {
    if (x > 1.0 || x < -1.0 || std::isnan(x)) ++n_clipped;
    const double v = std::isnan(x) ? 0.0 : std::clamp(x, -1.0, 1.0);
    if (pcm) {
      const double q = std::clamp(std::round(v * 32768.0), -32768.0, 32767.0);
      put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
    } else {
      put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    }
  }
  if (clipped) *clipped = n_clipped;
  return out;
}

std::size_t write_wav(const std::filesystem::path& path, const Signal& signal,
                      BitDepth bit_depth) {
  std::size_t clipped = 0;
  write_file_atomic(path, encode_wav(signal, bit_depth, &clipped));
  return clipped;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::vector<std::uint8_t>& bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw DataError("I/O error writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw DataError("cannot rename " + tmp.string() + " to " + path.string() +
                    ": " + ec.message());
  }
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& text) {
  write_file_atomic(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

}  // namespace cmfsep
