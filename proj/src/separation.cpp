// Copyright 2026 The cmfsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "cmfsep/separation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cmfsep/errors.hpp"

namespace cmfsep {

void SepConfig::validate() const {
  if (rank == 0) throw std::invalid_argument("rank must be >= 1");
  if (iters == 0) throw std::invalid_argument("iters must be >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (!(tol >= 0.0)) throw std::invalid_argument("tol must be >= 0");
  stft.validate();
}

ComplexMatrix normalize_columns(const ComplexMatrix& x) {
  ComplexMatrix out = x;
  for (std::size_t j = 0; j < x.cols(); ++j) {
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) norm_sq += std::norm(x(i, j));
    if (norm_sq == 0.0) continue;
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (std::size_t i = 0; i < x.rows(); ++i) out(i, j) *= inv;
  }
  return out;
}

ComplexSpectrogram concat_spectrograms(std::span<const Signal> signals,
                                       const StftConfig& cfg) {
  if (signals.empty()) throw DataError("empty training set");
  ComplexSpectrogram all;
  for (const Signal& s : signals) {
    if (s.sample_rate != cfg.sample_rate) {
      throw DataError("sample rate mismatch: signal at " +
                      std::to_string(s.sample_rate) + " Hz, config " +
                      std::to_string(cfg.sample_rate) + " Hz");
    }
    ComplexSpectrogram spec = stft(s, cfg);
    all = all.empty() ? std::move(spec) : hconcat(all, spec);
  }
  return all;
}

BasisSet train_bases(std::span<const Signal> training_signals,
                     const std::string& speaker_id, const SepConfig& cfg) {
  cfg.validate();
  const ComplexSpectrogram z = concat_spectrograms(training_signals, cfg.stft);
  CmfResult fit = cmf_factorize(z, cfg.rank, cfg);
  // H is discarded, so the column scale can be dropped outright
  return {normalize_columns(fit.x), speaker_id, cfg.stft};
}

SourceEstimates estimate_sources(const BasisSet& bases_i,
                                 const BasisSet& bases_j, const RealMatrix& h) {
  const std::size_t ri = bases_i.rank();
  const std::size_t rj = bases_j.rank();
  if (h.rows() != ri + rj) {
    throw std::invalid_argument("estimate_sources: weights have " +
                                std::to_string(h.rows()) + " rows, bases " +
                                std::to_string(ri) + " + " +
                                std::to_string(rj));
  }
  return {complex_matmul_real(bases_i.x_train, row_slice(h, 0, ri)),
          complex_matmul_real(bases_j.x_train, row_slice(h, ri, rj))};
}

SeparationResult separate(const Signal& mix, const BasisSet& bases_i,
                          const BasisSet& bases_j, const SepConfig& cfg,
                          const CmfHooks& hooks) {
  if (!(bases_i.stft == bases_j.stft)) {
    throw DataError("stft config mismatch between bases '" +
                    bases_i.speaker_id + "' (frame " +
                    std::to_string(bases_i.stft.frame_len) + ", hop " +
                    std::to_string(bases_i.stft.hop) + ", " +
                    std::to_string(bases_i.stft.sample_rate) + " Hz) and '" +
                    bases_j.speaker_id + "' (frame " +
                    std::to_string(bases_j.stft.frame_len) + ", hop " +
                    std::to_string(bases_j.stft.hop) + ", " +
                    std::to_string(bases_j.stft.sample_rate) + " Hz)");
  }
  const StftConfig& stft_cfg = bases_i.stft;
  if (mix.sample_rate != stft_cfg.sample_rate) {
    throw DataError("sample rate mismatch: mixture at " +
                    std::to_string(mix.sample_rate) + " Hz, bases at " +
                    std::to_string(stft_cfg.sample_rate) + " Hz");
  }
  if (frame_count(mix.samples.size(), stft_cfg) == 0) {
    throw DataError("mixture of " + std::to_string(mix.samples.size()) +
                    " samples is shorter than one frame");
  }
  SepConfig run_cfg = cfg;
  run_cfg.stft = stft_cfg;
  run_cfg.validate();

  const ComplexSpectrogram z = stft(mix, stft_cfg);
  const ComplexMatrix fixed = hconcat(bases_i.x_train, bases_j.x_train);
  SeparationResult out;
  out.fit = cmf_factorize(z, fixed.cols(), run_cfg, fixed, hooks);
  out.h = out.fit.h;
  out.estimates = estimate_sources(bases_i, bases_j, out.h);
  out.source_i = reconstruct(out.estimates.spec_i, run_cfg);
  out.source_j = reconstruct(out.estimates.spec_j, run_cfg);
  out.source_i.samples.resize(mix.samples.size(), 0.0);
  out.source_j.samples.resize(mix.samples.size(), 0.0);
  return out;
}

Signal reconstruct(const ComplexSpectrogram& spec, const SepConfig& cfg) {
  return istft(spec, cfg.stft);
}

Mixture mix_equal_energy(const Signal& a, const Signal& b) {
  if (a.sample_rate != b.sample_rate) {
    throw DataError("cannot mix signals at " + std::to_string(a.sample_rate) +
                    " and " + std::to_string(b.sample_rate) + " Hz");
  }
  const std::size_t n = std::min(a.samples.size(), b.samples.size());
  double ea = 0.0, eb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ea += a.samples[i] * a.samples[i];
    eb += b.samples[i] * b.samples[i];
  }
  if (ea == 0.0 || eb == 0.0) throw DataError("cannot mix a silent source");
  const double gain = std::sqrt(ea / eb);
  Mixture m;
  m.mix.sample_rate = m.source_a.sample_rate = m.source_b.sample_rate =
      a.sample_rate;
  m.source_a.samples.assign(a.samples.begin(), a.samples.begin() + n);
  m.source_b.samples.resize(n);
  m.mix.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    m.source_b.samples[i] = b.samples[i] * gain;
    m.mix.samples[i] = m.source_a.samples[i] + m.source_b.samples[i];
  }
  return m;
}

}  // namespace cmfsep
