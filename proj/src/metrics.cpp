// Copyright 2026 The cmfsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "cmfsep/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "cmfsep/errors.hpp"
#include "json.hpp"

namespace cmfsep {

namespace {

double energy(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc;
}

nlohmann::json report_json(const EvalReport& r) {
  nlohmann::json j;
  j["correlation"] = r.correlation;
  j["tir_loss"] = r.tir_loss;
  j["tir_esc"] = r.tir_esc;
  j["snr_db"] = r.snr_db;
  j["pesq"] = r.pesq ? nlohmann::json(*r.pesq) : nlohmann::json(nullptr);
  j["tir_loss_definition"] = kTirLossDefinition;
  return j;
}

}  // namespace

std::vector<double> align_length(std::span<const double> est, std::size_t len) {
  std::vector<double> out(len, 0.0);
  std::copy_n(est.begin(), std::min(len, est.size()), out.begin());
  return out;
}

double correlation(const Signal& ref, const Signal& est) {
  const std::size_t n = ref.samples.size();
  if (n == 0) throw DataError("correlation: empty reference");
  const std::vector<double> e = align_length(est.samples, n);
  double mr = 0.0, me = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mr += ref.samples[i];
    me += e[i];
  }
  mr /= static_cast<double>(n);
  me /= static_cast<double>(n);
  double srr = 0.0, see = 0.0, sre = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = ref.samples[i] - mr;
    const double b = e[i] - me;
    srr += a * a;
    see += b * b;
    sre += a * b;
  }
  if (srr == 0.0 || see == 0.0)
    throw DataError("correlation undefined for a zero-variance signal");
  return std::clamp(sre / std::sqrt(srr * see), -1.0, 1.0);
}

double tir_loss(const Signal& ref, const Signal& est, const StftConfig& cfg,
                std::vector<double>* per_frame) {
  const std::size_t n = ref.samples.size();
  if (n == 0) throw DataError("tir_loss: empty reference");
  if (cfg.frame_len == 0 || cfg.hop == 0)
    throw std::invalid_argument("tir_loss: frame_len and hop must be > 0");
  const std::vector<double> e = align_length(est.samples, n);
  const std::size_t frame = std::min(cfg.frame_len, n);
  const std::size_t frames = (n - frame) / cfg.hop + 1;

  std::vector<double> ref_energy(frames), err_energy(frames);
  std::vector<double> diff(frame);
  for (std::size_t f = 0; f < frames; ++f) {
    const std::span<const double> r(ref.samples.data() + f * cfg.hop, frame);
    for (std::size_t i = 0; i < frame; ++i) diff[i] = e[f * cfg.hop + i] - r[i];
    ref_energy[f] = energy(r);
    err_energy[f] = energy(diff);
  }
  const double loudest = *std::ranges::max_element(ref_energy);
  if (loudest == 0.0) throw DataError("tir_loss: reference is silent");
  const double floor = loudest * 1e-10;

  double sum = 0.0;
  std::size_t scored = 0;
  if (per_frame) per_frame->clear();
  for (std::size_t f = 0; f < frames; ++f) {
    if (ref_energy[f] <= floor) continue;
    double loss = 0.0;
    if (err_energy[f] > 0.0) {
      const double snr = 10.0 * std::log10(ref_energy[f] / err_energy[f]);
      loss = std::clamp(1.0 - snr / kTirCeilingDb, 0.0, 1.0);
    }
    sum += loss;
    ++scored;
    if (per_frame) per_frame->push_back(loss);
  }
  return sum / static_cast<double>(scored);
}

double tir_esc(const Signal& ref, const Signal& est, const StftConfig& cfg) {
  const double r = correlation(ref, est);
  return tir_loss(ref, est, cfg) * (1.0 - r * r);
}

double snr_db(const Signal& ref, const Signal& est) {
  const std::size_t n = ref.samples.size();
  const double signal = energy(ref.samples);
  if (signal == 0.0) throw DataError("snr_db: reference is silent");
  const std::vector<double> e = align_length(est.samples, n);
  double noise = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = e[i] - ref.samples[i];
    noise += d * d;
  }
  if (noise == 0.0) return kSnrCapDb;
  return std::min(kSnrCapDb, 10.0 * std::log10(signal / noise));
}

EvalReport evaluate(const Signal& ref, const Signal& est,
                    const StftConfig& cfg) {
  EvalReport r;
  r.correlation = correlation(ref, est);
  r.tir_loss = tir_loss(ref, est, cfg, &r.per_frame);
  r.tir_esc = r.tir_loss * (1.0 - r.correlation * r.correlation);
  r.snr_db = snr_db(ref, est);
  return r;
}

BatchSummary summarize(std::span<const EvalReport> reports) {
  if (reports.empty()) throw std::invalid_argument("summarize: no reports");
  const double n = static_cast<double>(reports.size());
  BatchSummary s;
  auto fields = [](EvalReport& r) {
    return std::array<double*, 4>{&r.correlation, &r.tir_loss, &r.tir_esc,
                                  &r.snr_db};
  };
  auto mean = fields(s.mean);
  auto sd = fields(s.stddev);
  for (const EvalReport& r : reports) {
    EvalReport copy = r;
    auto v = fields(copy);
    for (std::size_t k = 0; k < 4; ++k) *mean[k] += *v[k] / n;
  }
  if (reports.size() > 1) {
    for (const EvalReport& r : reports) {
      EvalReport copy = r;
      auto v = fields(copy);
      for (std::size_t k = 0; k < 4; ++k) {
        const double d = *v[k] - *mean[k];
        *sd[k] += d * d / (n - 1.0);
      }
    }
    for (double* p : sd) *p = std::sqrt(*p);
  }
  return s;
}

std::string to_json(const EvalReport& report) {
  return report_json(report).dump();
}

std::string to_json(std::span<const EvalReport> reports,
                    const BatchSummary& summary) {
  nlohmann::json j;
  j["reports"] = nlohmann::json::array();
  for (const auto& r : reports) j["reports"].push_back(report_json(r));
  j["mean"] = report_json(summary.mean);
  j["std"] = report_json(summary.stddev);
  return j.dump();
}

std::string csv_header() {
  return "label,correlation,tir_loss,tir_esc,snr_db,pesq";
}

std::string to_csv_row(const std::string& label, const EvalReport& report) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << label
     << ',' << report.correlation << ',' << report.tir_loss << ','
     << report.tir_esc << ',' << report.snr_db << ',';
  if (report.pesq) os << *report.pesq;
  return os.str();
}

}  // namespace cmfsep
