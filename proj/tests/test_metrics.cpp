// Copyright 2026 The cmfsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <cmath>
#include <vector>

#include "cmfsep/errors.hpp"
#include "cmfsep/metrics.hpp"
#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"

using namespace cmfsep;
using cmfsep::testing::pearson;
using cmfsep::testing::random_signal;
using cmfsep::testing::sine;

namespace {

Signal scaled(const Signal& s, double g) {
  Signal out = s;
  for (double& v : out.samples) v *= g;
  return out;
}

Signal noise_like(const Signal& ref, std::mt19937_64& g, double energy_ratio) {
  std::normal_distribution<double> d;
  Signal n = ref;
  double en = 0.0, er = 0.0;
  for (std::size_t i = 0; i < n.samples.size(); ++i) {
    n.samples[i] = d(g);
    en += n.samples[i] * n.samples[i];
    er += ref.samples[i] * ref.samples[i];
  }
  return scaled(n, std::sqrt(energy_ratio * er / en));
}

}  // namespace

TEST_CASE("correlation: self and anti") {
  std::mt19937_64 g(1);
  const Signal x = random_signal(5000, g);
  CHECK(correlation(x, x) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(correlation(x, scaled(x, -1.0)) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(correlation(x, x) <= 1.0);
}

TEST_CASE("correlation: sine against independent noise") {
  const Signal s = sine(440.0, 100000);
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    std::mt19937_64 g(trial);
    const Signal n = random_signal(100000, g);
    const double r = correlation(s, n);
    CHECK(std::abs(r) <= 0.05);
    CHECK(r == doctest::Approx(pearson(s.samples, n.samples, 0, 100000)).epsilon(1e-9));
  }
}

TEST_CASE("correlation: zero variance and length alignment") {
  Signal flat;
  flat.samples.assign(100, 0.25);
  std::mt19937_64 g(2);
  const Signal x = random_signal(100, g);
  CHECK_THROWS_AS(correlation(flat, x), DataError);
  CHECK_THROWS_AS(correlation(x, flat), DataError);

  // est is truncated or zero-padded at the tail
  Signal longer = x;
  longer.samples.push_back(9.0);
  CHECK(correlation(x, longer) == doctest::Approx(1.0).epsilon(1e-15));
  const std::vector<double> padded = align_length(std::vector<double>{1, 2}, 4);
  CHECK(padded == std::vector<double>{1, 2, 0, 0});
}

TEST_CASE("tir_loss: hand cases") {
  const StftConfig cfg;
  const Signal s = sine(440.0, 16000);
  CHECK(tir_loss(s, s, cfg) == 0.0);

  // per-frame SNR of a half-gain copy is 20·log10(2) dB
  const double want = 1.0 - 20.0 * std::log10(2.0) / 35.0;
  std::vector<double> frames;
  CHECK(tir_loss(s, scaled(s, 0.5), cfg, &frames) ==
        doctest::Approx(want).epsilon(1e-12));
  CHECK(want == doctest::Approx(0.828).epsilon(1e-3));
  CHECK(frames.size() == (16000 - 512) / 256 + 1);

  std::mt19937_64 g(3);
  CHECK(tir_loss(s, noise_like(s, g, 1.0), cfg) >= 0.9);
}

TEST_CASE("tir_loss: silent frames are skipped, all-silent is an error") {
  const StftConfig cfg;
  Signal s = sine(440.0, 4096);
  for (std::size_t i = 0; i < 2048; ++i) s.samples[i] = 0.0;
  std::vector<double> frames;
  const double v = tir_loss(s, scaled(s, 0.5), cfg, &frames);
  CHECK(v == doctest::Approx(1.0 - 20.0 * std::log10(2.0) / 35.0).epsilon(1e-12));
  CHECK(frames.size() < (4096 - 512) / 256 + 1);

  Signal silent;
  silent.samples.assign(4096, 0.0);
  CHECK_THROWS_AS(tir_loss(silent, s, cfg), DataError);
}

TEST_CASE("tir_esc composition") {
  const StftConfig cfg;
  const Signal s = sine(440.0, 16000);
  CHECK(tir_esc(s, s, cfg) == 0.0);

  std::mt19937_64 g(4);
  for (int trial = 0; trial < 10; ++trial) {
    const Signal a = random_signal(8000, g);
    const Signal b = random_signal(8000, g);
    const double r = correlation(a, b);
    const double l = tir_loss(a, b, cfg);
    const double e = tir_esc(a, b, cfg);
    CHECK(std::abs(e - l * (1.0 - r * r)) <= 1e-12);
    CHECK(e <= l);
    CHECK(e >= 0.0);
    CHECK(l <= 1.0);
  }
}

TEST_CASE("snr_db") {
  std::mt19937_64 g(5);
  const Signal x = random_signal(8000, g);
  CHECK(snr_db(x, x) == 120.0);
  Signal zero = x;
  for (double& v : zero.samples) v = 0.0;
  CHECK(snr_db(x, zero) == 0.0);

  const Signal n = noise_like(x, g, 0.1);
  Signal noisy = x;
  for (std::size_t i = 0; i < noisy.samples.size(); ++i) noisy.samples[i] += n.samples[i];
  CHECK(std::abs(snr_db(x, noisy) - 10.0) <= 1e-9);
  CHECK_THROWS_AS(snr_db(zero, x), DataError);
}

TEST_CASE("metrics are invariant to a shared positive gain") {
  const StftConfig cfg;
  std::mt19937_64 g(6);
  const Signal ref = sine(440.0, 8000);
  Signal est = ref;
  const Signal n = noise_like(ref, g, 0.3);
  for (std::size_t i = 0; i < est.samples.size(); ++i) est.samples[i] += n.samples[i];
  const EvalReport base = evaluate(ref, est, cfg);

  // a power of two scales every sum exactly
  const EvalReport pow2 = evaluate(scaled(ref, 4.0), scaled(est, 4.0), cfg);
  CHECK(pow2.correlation == base.correlation);
  CHECK(pow2.tir_loss == base.tir_loss);
  CHECK(pow2.snr_db == base.snr_db);

  const EvalReport odd = evaluate(scaled(ref, 3.7), scaled(est, 3.7), cfg);
  CHECK(odd.correlation == doctest::Approx(base.correlation).epsilon(1e-12));
  CHECK(odd.tir_loss == doctest::Approx(base.tir_loss).epsilon(1e-12));
  CHECK(odd.snr_db == doctest::Approx(base.snr_db).epsilon(1e-12));
}

TEST_CASE("evaluate is deterministic and serializes") {
  const StftConfig cfg;
  std::mt19937_64 g(7);
  const Signal a = random_signal(4000, g);
  const Signal b = random_signal(4000, g);
  const EvalReport r1 = evaluate(a, b, cfg);
  const EvalReport r2 = evaluate(a, b, cfg);
  CHECK(r1.correlation == r2.correlation);
  CHECK(r1.tir_loss == r2.tir_loss);
  CHECK(r1.per_frame == r2.per_frame);
  CHECK(to_json(r1) == to_json(r2));

  const auto j = nlohmann::json::parse(to_json(r1));
  for (const char* key : {"correlation", "tir_loss", "tir_esc", "snr_db"})
    CHECK(j.contains(key));
  CHECK(j["pesq"].is_null());
  CHECK(j["tir_loss"].get<double>() == r1.tir_loss);
  CHECK(j["tir_loss_definition"].get<std::string>() == kTirLossDefinition);

  CHECK(csv_header() == "label,correlation,tir_loss,tir_esc,snr_db,pesq");
  const std::string row = to_csv_row("x", r1);
  CHECK(row.rfind("x,", 0) == 0);
  CHECK(std::count(row.begin(), row.end(), ',') == 5);
}

TEST_CASE("batch summary uses the sample standard deviation") {
  EvalReport a, b;
  a.correlation = 0.5;
  b.correlation = 0.9;
  a.snr_db = 10.0;
  b.snr_db = 14.0;
  const std::vector<EvalReport> rs{a, b};
  const BatchSummary s = summarize(rs);
  CHECK(s.mean.correlation == doctest::Approx(0.7));
  CHECK(s.stddev.correlation == doctest::Approx(std::sqrt(0.08)));
  CHECK(s.stddev.snr_db == doctest::Approx(std::sqrt(8.0)));

  const auto j = nlohmann::json::parse(to_json(rs, s));
  CHECK(j["reports"].size() == 2);
  CHECK(j.contains("mean"));
  CHECK(j.contains("std"));

  const std::vector<EvalReport> one{a};
  CHECK(summarize(one).stddev.correlation == 0.0);
}
