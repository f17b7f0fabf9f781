// Copyright 2026 The cmfsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "cmfsep/bases_io.hpp"

#include <bit>
#include <cstring>
#include <limits>
#include <string>

#include "cmfsep/errors.hpp"
#include "cmfsep/wav.hpp"

namespace cmfsep {

namespace {

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) { le(v, 2); }
  void u32(std::uint32_t v) { le(v, 4); }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v), 8); }
  void bytes(const std::string& s) { out_.insert(out_.end(), s.begin(), s.end()); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  void le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& in) : in_(in) {}

  std::size_t remaining() const { return in_.size() - pos_; }
  std::uint8_t u8() { return static_cast<std::uint8_t>(le(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(le(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  double f64() { return std::bit_cast<double>(le(8)); }
  std::string str(std::size_t n) {
    need(n);
    std::string s(in_.begin() + static_cast<std::ptrdiff_t>(pos_),
                  in_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
    pos_ += n;
    return s;
  }

 private:
  void need(std::size_t n) const {
    if (remaining() < n) throw DataError("CMFB: truncated header");
  }
  std::uint64_t le(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(in_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }
  const std::vector<std::uint8_t>& in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_bases(const BasisSet& b) {
  if (b.speaker_id.size() > std::numeric_limits<std::uint16_t>::max())
    throw std::invalid_argument("speaker id longer than 65535 bytes");
  if (b.x_train.rows() != b.stft.freq_bins()) {
    throw std::invalid_argument("bases have " + std::to_string(b.x_train.rows()) +
                                " rows, frame_len implies " +
                                std::to_string(b.stft.freq_bins()));
  }
  Writer w;
  w.bytes("CMFB");
  w.u16(kBasesVersion);
  w.u16(static_cast<std::uint16_t>(b.speaker_id.size()));
  w.bytes(b.speaker_id);
  w.u32(static_cast<std::uint32_t>(b.rank()));
  w.u32(static_cast<std::uint32_t>(b.x_train.rows()));
  w.u32(static_cast<std::uint32_t>(b.stft.frame_len));
  w.u32(static_cast<std::uint32_t>(b.stft.hop));
  w.u32(b.stft.sample_rate);
  w.u8(static_cast<std::uint8_t>(b.stft.window));
  for (const Complex& v : b.x_train.data()) {
    w.f64(v.real());
    w.f64(v.imag());
  }
  return w.take();
}

BasisSet decode_bases(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), "CMFB", 4) != 0)
    throw DataError("not a CMFB file");
  Reader r(bytes);
  r.str(4);
  const std::uint16_t version = r.u16();
  if (version != kBasesVersion) {
    throw DataError("unsupported CMFB version " + std::to_string(version) +
                    " (expected " + std::to_string(kBasesVersion) + ")");
  }
  BasisSet b;
  b.speaker_id = r.str(r.u16());
  const std::uint32_t rank = r.u32();
  const std::uint32_t bins = r.u32();
  b.stft.frame_len = r.u32();
  b.stft.hop = r.u32();
  b.stft.sample_rate = r.u32();
  b.stft.window = static_cast<Window>(r.u8());
  if (bins != b.stft.freq_bins()) {
    throw DataError("CMFB: freq_bins " + std::to_string(bins) +
                    " inconsistent with frame_len " +
                    std::to_string(b.stft.frame_len));
  }
  if (rank == 0) throw DataError("CMFB: rank is zero");
  try {
    b.stft.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("CMFB: ") + e.what());
  }
  const std::size_t expected = static_cast<std::size_t>(rank) * bins * 16;
  if (r.remaining() < expected) {
    throw DataError("CMFB: truncated payload: expected " +
                    std::to_string(expected) + " bytes, got " +
                    std::to_string(r.remaining()));
  }
  std::vector<Complex> data(static_cast<std::size_t>(rank) * bins);
  for (auto& v : data) {
    const double re = r.f64();
    v = Complex(re, r.f64());
  }
  b.x_train = ComplexMatrix(bins, rank, std::move(data));
  return b;
}

void save_bases(const std::filesystem::path& path, const BasisSet& bases) {
  write_file_atomic(path, encode_bases(bases));
}

BasisSet load_bases(const std::filesystem::path& path) {
  return decode_bases(read_file(path));
}

}  // namespace cmfsep
