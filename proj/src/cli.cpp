// Copyright 2026 The cmfsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "cmfsep/cli.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "cmfsep/bases_io.hpp"
#include "cmfsep/cmf.hpp"
#include "cmfsep/errors.hpp"
#include "cmfsep/metrics.hpp"
#include "cmfsep/separation.hpp"
#include "cmfsep/wav.hpp"

namespace fs = std::filesystem;

namespace cmfsep {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonOpts {
  std::size_t iters = 500;
  double tol = 1e-6;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--iters", o.iters, "Maximum NMF iterations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--tol", o.tol, "Relative objective change to stop at")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--seed", o.seed,
                  "Random seed (default: $CMF_SEP_SEED, else 0)");
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  const char* env = std::getenv("CMF_SEP_SEED");
  if (!env || !*env) return 0;
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (errno != 0 || *end != '\0' || env[0] == '-')
    throw UsageError(std::string("CMF_SEP_SEED is not an unsigned integer: ") + env);
  return v;
}

SepConfig make_config(const CommonOpts& o, std::size_t rank) {
  SepConfig cfg;
  cfg.rank = rank;
  cfg.iters = o.iters;
  cfg.tol = o.tol;
  cfg.seed = resolve_seed(o.seed);
  return cfg;
}

StftConfig make_stft(std::size_t frame, std::size_t hop, std::uint32_t sr) {
  StftConfig s;
  s.frame_len = frame;
  s.hop = hop;
  s.sample_rate = sr;
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return s;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

int run_factorize(const fs::path& in, std::size_t rank, std::size_t frame,
                  std::size_t hop, std::size_t checkpoint_every,
                  const std::optional<fs::path>& log, const CommonOpts& common,
                  std::ostream& out) {
  const WavFile wav = read_wav(in);
  SepConfig cfg = make_config(common, rank);
  cfg.stft = make_stft(frame, hop, wav.samples.sample_rate);
  const ComplexSpectrogram z = stft(wav.samples, cfg.stft);

  std::ostringstream log_text;
  CmfHooks hooks;
  if (log) {
    log_text << "# iter\tblock_objective\tcomplex_error\n";
    hooks.observer = make_iteration_logger(log_text);
    hooks.checkpoint_every = checkpoint_every;
  }
  const CmfResult res = cmf_factorize(z, rank, cfg, std::nullopt, hooks);
  if (log) write_file_atomic(*log, log_text.str());

  out << "iterations\t" << res.objective_history.size() << '\n'
      << "block_objective\t"
      << fmt(res.objective_history.empty() ? 0.0 : res.objective_history.back())
      << '\n'
      << "complex_error\t" << fmt(res.final_error) << '\n'
      << "relative_error\t" << fmt(res.relative_error()) << '\n';
  return kExitOk;
}

int run_train(const fs::path& dir, const std::string& speaker_id,
              std::size_t rank, const fs::path& out_path, std::size_t frame,
              std::size_t hop, std::uint32_t sr, const CommonOpts& common,
              std::ostream& out) {
  if (!fs::is_directory(dir)) throw DataError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".wav")
      files.push_back(entry.path());
  }
  std::ranges::sort(files);
  if (files.empty()) throw DataError("no .wav files in " + dir.string());

  std::vector<Signal> signals;
  signals.reserve(files.size());
  for (const auto& f : files) {
    WavFile w = read_wav(f);
    if (w.samples.sample_rate != sr) {
      throw DataError(f.string() + ": sample rate " +
                      std::to_string(w.samples.sample_rate) + " Hz, expected " +
                      std::to_string(sr) + " Hz (resample first)");
    }
    signals.push_back(std::move(w.samples));
  }
  SepConfig cfg = make_config(common, rank);
  cfg.stft = make_stft(frame, hop, sr);
  const BasisSet bases = train_bases(signals, speaker_id, cfg);
  save_bases(out_path, bases);
  out << "trained '" << speaker_id << "' rank " << rank << " from "
      << files.size() << " file(s) -> " << out_path.string() << '\n';
  return kExitOk;
}

int run_separate(const fs::path& mix_path, const fs::path& a_path,
                 const fs::path& b_path, const fs::path& out_dir,
                 const std::string& depth, const CommonOpts& common,
                 std::ostream& out, std::ostream& err) {
  const BasisSet a = load_bases(a_path);
  const BasisSet b = load_bases(b_path);
  if (!(a.stft == b.stft)) {
    throw DataError("stft config mismatch: " + a_path.string() + " (frame " +
                    std::to_string(a.stft.frame_len) + ", hop " +
                    std::to_string(a.stft.hop) + ", " +
                    std::to_string(a.stft.sample_rate) + " Hz) vs " +
                    b_path.string() + " (frame " +
                    std::to_string(b.stft.frame_len) + ", hop " +
                    std::to_string(b.stft.hop) + ", " +
                    std::to_string(b.stft.sample_rate) + " Hz)");
  }
  const WavFile mix = read_wav(mix_path);
  SepConfig cfg = make_config(common, a.rank() + b.rank());
  cfg.stft = a.stft;
  const SeparationResult res = separate(mix.samples, a, b, cfg);

  const BitDepth bd = depth == "pcm16" ? BitDepth::kPcm16 : BitDepth::kFloat32;
  std::size_t clip_a = 0, clip_b = 0;
  // encode both before touching the output directory
  const auto bytes_a = encode_wav(res.source_i, bd, &clip_a);
  const auto bytes_b = encode_wav(res.source_j, bd, &clip_b);
  fs::create_directories(out_dir);
  write_file_atomic(out_dir / "est_a.wav", bytes_a);
  write_file_atomic(out_dir / "est_b.wav", bytes_b);
  if (clip_a) err << "warning: clipped " << clip_a << " samples in est_a.wav\n";
  if (clip_b) err << "warning: clipped " << clip_b << " samples in est_b.wav\n";
  out << "relative_error\t" << fmt(res.fit.relative_error()) << '\n'
      << "wrote " << (out_dir / "est_a.wav").string() << ", "
      << (out_dir / "est_b.wav").string() << '\n';
  return kExitOk;
}

int run_eval(const std::vector<std::string>& refs,
             const std::vector<std::string>& ests, bool json, bool csv,
             std::size_t frame, std::size_t hop, std::ostream& out) {
  if (refs.size() != ests.size()) {
    throw UsageError("--ref given " + std::to_string(refs.size()) +
                     " times but --est " + std::to_string(ests.size()));
  }
  std::vector<EvalReport> reports;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const WavFile ref = read_wav(refs[i]);
    const WavFile est = read_wav(ests[i]);
    if (ref.samples.sample_rate != est.samples.sample_rate) {
      throw DataError("sample rate mismatch between " + refs[i] + " and " +
                      ests[i]);
    }
    StftConfig frames;
    frames.frame_len = frame;
    frames.hop = hop;
    frames.sample_rate = ref.samples.sample_rate;
    reports.push_back(evaluate(ref.samples, est.samples, frames));
  }
  const BatchSummary summary = summarize(reports);
  if (json) {
    out << (reports.size() == 1 ? to_json(reports.front())
                                : to_json(reports, summary))
        << '\n';
  } else if (csv) {
    out << csv_header() << '\n';
    for (std::size_t i = 0; i < reports.size(); ++i)
      out << to_csv_row(ests[i], reports[i]) << '\n';
    if (reports.size() > 1) {
      out << to_csv_row("mean", summary.mean) << '\n'
          << to_csv_row("std", summary.stddev) << '\n';
    }
  } else {
    auto print = [&out](const std::string& label, const EvalReport& r) {
      out << label << '\n'
          << "  correlation\t" << fmt(r.correlation) << '\n'
          << "  tir_loss\t" << fmt(r.tir_loss) << "  (" << kTirLossDefinition
          << ")\n"
          << "  tir_esc\t" << fmt(r.tir_esc) << '\n'
          << "  snr_db\t" << fmt(r.snr_db) << '\n';
    };
    for (std::size_t i = 0; i < reports.size(); ++i) print(ests[i], reports[i]);
    if (reports.size() > 1) {
      print("mean", summary.mean);
      print("std", summary.stddev);
    }
  }
  return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Supervised single-channel source separation by complex matrix "
               "factorization",
               "cmfsep"};
  app.require_subcommand(1);

  // factorize
  auto* fact = app.add_subcommand("factorize", "Factor the STFT of a WAV file");
  fs::path fact_in;
  std::optional<fs::path> fact_log;
  std::size_t fact_rank = 40, fact_frame = 512, fact_hop = 256, fact_ckpt = 10;
  CommonOpts fact_common;
  fact->add_option("--in", fact_in, "Input WAV")->required();
  fact->add_option("--rank", fact_rank, "Number of complex bases")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fact->add_option("--log", fact_log, "Tab-separated iteration log");
  fact->add_option("--checkpoint-every", fact_ckpt,
                   "Log the complex-domain error every N iterations")
      ->capture_default_str();
  fact->add_option("--frame", fact_frame)->capture_default_str();
  fact->add_option("--hop", fact_hop)->capture_default_str();
  add_common(fact, fact_common);

  // train
  auto* train = app.add_subcommand("train", "Train speaker bases from a WAV directory");
  fs::path train_dir, train_out;
  std::string train_id;
  std::size_t train_rank = 40, train_frame = 512, train_hop = 256;
  std::uint32_t train_sr = 16000;
  CommonOpts train_common;
  train->add_option("--speaker-dir", train_dir, "Directory of mono WAVs")->required();
  train->add_option("--speaker-id", train_id, "Label stored in the bases file")->required();
  train->add_option("--out", train_out, "Output .cmfb file")->required();
  train->add_option("--rank", train_rank)->check(CLI::PositiveNumber)->capture_default_str();
  train->add_option("--frame", train_frame)->capture_default_str();
  train->add_option("--hop", train_hop)->capture_default_str();
  train->add_option("--sr", train_sr)->capture_default_str();
  add_common(train, train_common);

  // separate
  auto* sep = app.add_subcommand("separate", "Separate a two-speaker mixture");
  fs::path sep_mix, sep_a, sep_b, sep_out;
  std::string sep_depth = "float32";
  CommonOpts sep_common;
  sep->add_option("--mix", sep_mix, "Mixture WAV")->required();
  sep->add_option("--bases-a", sep_a, "Bases for source a")->required();
  sep->add_option("--bases-b", sep_b, "Bases for source b")->required();
  sep->add_option("--out-dir", sep_out, "Directory for est_a.wav / est_b.wav")->required();
  sep->add_option("--bit-depth", sep_depth)
      ->check(CLI::IsMember({"float32", "pcm16"}))
      ->capture_default_str();
  add_common(sep, sep_common);

  // eval
  auto* ev = app.add_subcommand("eval", "Score estimates against references");
  std::vector<std::string> ev_refs, ev_ests;
  bool ev_json = false, ev_csv = false;
  std::size_t ev_frame = 512, ev_hop = 256;
  ev->add_option("--ref", ev_refs, "Reference WAV (repeatable)")->required();
  ev->add_option("--est", ev_ests, "Estimate WAV (repeatable)")->required();
  auto* json_flag = ev->add_flag("--json", ev_json, "Emit JSON");
  ev->add_flag("--csv", ev_csv, "Emit CSV")->excludes(json_flag);
  ev->add_option("--frame", ev_frame, "Scoring frame length")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  ev->add_option("--hop", ev_hop)->check(CLI::PositiveNumber)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*fact) {
      return run_factorize(fact_in, fact_rank, fact_frame, fact_hop, fact_ckpt,
                           fact_log, fact_common, out);
    }
    if (*train) {
      return run_train(train_dir, train_id, train_rank, train_out, train_frame,
                       train_hop, train_sr, train_common, out);
    }
    if (*sep) {
      return run_separate(sep_mix, sep_a, sep_b, sep_out, sep_depth, sep_common,
                          out, err);
    }
    return run_eval(ev_refs, ev_ests, ev_json, ev_csv, ev_frame, ev_hop, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace cmfsep
