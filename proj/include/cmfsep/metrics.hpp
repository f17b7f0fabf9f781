// Copyright 2026 The cmfsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cmfsep/stft.hpp"

namespace cmfsep {

/// Full-credit ceiling of the interference-loss surrogate, in dB.
inline constexpr double kTirCeilingDb = 35.0;
/// snr_db() value reported for an exact match.
inline constexpr double kSnrCapDb = 120.0;

inline constexpr const char* kTirLossDefinition =
    "surrogate: mean over non-silent frames of clamp(1 - frameSNR_dB/35, 0, 1)";

struct EvalReport {
  double correlation = 0.0;
  double tir_loss = 0.0;
  double tir_esc = 0.0;
  double snr_db = 0.0;
  /// Per-frame interference loss for the frames that were scored.
  std::vector<double> per_frame;
  /// Slot for externally computed PESQ; never filled here.
  std::optional<double> pesq;
};

/// Truncate or zero-pad `est` at the tail to `len` samples.
std::vector<double> align_length(std::span<const double> est, std::size_t len);

/// Pearson correlation after aligning est to ref. Throws DataError when either
/// sequence has zero variance.
double correlation(const Signal& ref, const Signal& est);

/// Interference-loss surrogate in [0, 1]; 0 is a perfect reconstruction.
/// Frames are rectangular, frame_len long, hop apart. Reference frames with
/// energy <= 1e-10 of the loudest frame are skipped.
double tir_loss(const Signal& ref, const Signal& est, const StftConfig& cfg,
                std::vector<double>* per_frame = nullptr);

/// tir_loss · (1 − r²).
double tir_esc(const Signal& ref, const Signal& est, const StftConfig& cfg);

/// 10·log10(‖ref‖² / ‖est − ref‖²), capped at 120 dB.
double snr_db(const Signal& ref, const Signal& est);

EvalReport evaluate(const Signal& ref, const Signal& est, const StftConfig& cfg);

struct BatchSummary {
  EvalReport mean;
  /// Sample standard deviation (n − 1); zero for a single report.
  EvalReport stddev;
};

BatchSummary summarize(std::span<const EvalReport> reports);

/// Single JSON object with keys correlation, tir_loss, tir_esc, snr_db, pesq
/// and tir_loss_definition.
std::string to_json(const EvalReport& report);
std::string to_json(std::span<const EvalReport> reports,
                    const BatchSummary& summary);

std::string csv_header();
std::string to_csv_row(const std::string& label, const EvalReport& report);

}  // namespace cmfsep
