// Copyright 2026 The cmfsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <span>
#include <string>
#include <utility>

#include "cmfsep/cmf.hpp"
#include "cmfsep/config.hpp"
#include "cmfsep/stft.hpp"

namespace cmfsep {

/// Trained complex bases for one speaker. Columns have unit Euclidean norm.
struct BasisSet {
  ComplexMatrix x_train;
  std::string speaker_id;
  StftConfig stft;

  std::size_t rank() const { return x_train.cols(); }

  friend bool operator==(const BasisSet&, const BasisSet&) = default;
};

/// Scale each column to unit norm; all-zero columns are left alone.
ComplexMatrix normalize_columns(const ComplexMatrix& x);

/// STFTs of all signals concatenated along the frame axis.
ComplexSpectrogram concat_spectrograms(std::span<const Signal> signals,
                                       const StftConfig& cfg);

BasisSet train_bases(std::span<const Signal> training_signals,
                     const std::string& speaker_id, const SepConfig& cfg);

struct SourceEstimates {
  ComplexSpectrogram spec_i;
  ComplexSpectrogram spec_j;
};

/// X_i·H_(i) and X_j·H_(j), with H split by rows at bases_i.rank(). Only the
/// bases and weights enter; the mixture is not an input.
SourceEstimates estimate_sources(const BasisSet& bases_i,
                                 const BasisSet& bases_j, const RealMatrix& h);

struct SeparationResult {
  Signal source_i;
  Signal source_j;
  SourceEstimates estimates;
  /// Weights against [X_i | X_j], (rank_i + rank_j) x frames.
  RealMatrix h;
  /// Complex-domain factorization of the mixture spectrogram.
  CmfResult fit;
};

/// Estimates weights of the mixture against the concatenated fixed bases and
/// resynthesizes each source from its own bases and weights. The STFT
/// configuration is taken from the bases; output signals have the mixture's
/// length (the unanalyzed tail is zero).
SeparationResult separate(const Signal& mix, const BasisSet& bases_i,
                          const BasisSet& bases_j, const SepConfig& cfg,
                          const CmfHooks& hooks = {});

Signal reconstruct(const ComplexSpectrogram& spec, const SepConfig& cfg);

struct Mixture {
  Signal mix;
  Signal source_a;
  Signal source_b;
};

/// Rescales b to a's energy and sums them (target-to-interference ratio 1).
/// The sum runs over the shorter length.
Mixture mix_equal_energy(const Signal& a, const Signal& b);

}  // namespace cmfsep
