// Copyright 2026 The cmfsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "cmfsep/bases_io.hpp"
#include "cmfsep/cmf.hpp"
#include "cmfsep/errors.hpp"
#include "cmfsep/metrics.hpp"
#include "cmfsep/nmf.hpp"
#include "cmfsep/separation.hpp"
#include "cmfsep/stft.hpp"
#include "cmfsep/wav.hpp"

namespace py = pybind11;
using namespace cmfsep;

namespace {

template <typename T>
using CArray = py::array_t<T, py::array::c_style | py::array::forcecast>;

template <typename T>
Matrix<T> to_matrix(const CArray<T>& a) {
  if (a.ndim() != 2) throw std::invalid_argument("expected a 2-D array");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  return Matrix<T>(rows, cols, std::vector<T>(a.data(), a.data() + a.size()));
}

template <typename T>
py::array_t<T> to_array(const Matrix<T>& m) {
  py::array_t<T> out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> out(v.size());
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

Signal to_signal(const CArray<double>& a, std::uint32_t sample_rate) {
  if (a.ndim() != 1) throw std::invalid_argument("expected a 1-D signal");
  return {std::vector<double>(a.data(), a.data() + a.size()), sample_rate};
}

StftConfig make_stft(std::size_t frame_len, std::size_t hop,
                     std::uint32_t sample_rate) {
  StftConfig cfg;
  cfg.frame_len = frame_len;
  cfg.hop = hop;
  cfg.sample_rate = sample_rate;
  cfg.validate();
  return cfg;
}

py::dict result_dict(const CmfResult& r) {
  py::dict d;
  d["x"] = to_array(r.x);
  d["h"] = to_array(r.h);
  d["objective_history"] = to_array(r.objective_history);
  d["final_error"] = r.final_error;
  d["relative_error"] = r.relative_error();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Complex matrix factorization for single-channel source separation";
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);

  py::class_<StftConfig>(m, "StftConfig")
      .def(py::init(&make_stft), py::arg("frame_len") = 512, py::arg("hop") = 256,
           py::arg("sample_rate") = 16000)
      .def_readonly("frame_len", &StftConfig::frame_len)
      .def_readonly("hop", &StftConfig::hop)
      .def_readonly("sample_rate", &StftConfig::sample_rate)
      .def_property_readonly("freq_bins", &StftConfig::freq_bins)
      .def("__eq__", [](const StftConfig& a, const StftConfig& b) { return a == b; })
      .def("__repr__", [](const StftConfig& c) {
        return "StftConfig(frame_len=" + std::to_string(c.frame_len) +
               ", hop=" + std::to_string(c.hop) +
               ", sample_rate=" + std::to_string(c.sample_rate) + ")";
      });

  py::class_<BasisSet>(m, "BasisSet")
      .def(py::init([](const CArray<std::complex<double>>& x, std::string id,
                       const StftConfig& cfg) {
             BasisSet b{to_matrix(x), std::move(id), cfg};
             if (b.x_train.rows() != cfg.freq_bins())
               throw std::invalid_argument("bases rows must equal frame_len/2 + 1");
             return b;
           }),
           py::arg("x"), py::arg("speaker_id"), py::arg("stft") = StftConfig{})
      .def_property_readonly("x", [](const BasisSet& b) { return to_array(b.x_train); })
      .def_readonly("speaker_id", &BasisSet::speaker_id)
      .def_readonly("stft", &BasisSet::stft)
      .def_property_readonly("rank", &BasisSet::rank)
      .def("__eq__", [](const BasisSet& a, const BasisSet& b) { return a == b; });

  m.def("dft",
        [](const CArray<std::complex<double>>& x, bool inverse) {
          const std::vector<Complex> v(x.data(), x.data() + x.size());
          const std::vector<Complex> out = dft(v, inverse);
          py::array_t<Complex> a(out.size());
          std::copy(out.begin(), out.end(), a.mutable_data());
          return a;
        },
        py::arg("x"), py::arg("inverse") = false);

  m.def("stft",
        [](const CArray<double>& x, const StftConfig& cfg) {
          return to_array(stft(to_signal(x, cfg.sample_rate), cfg));
        },
        py::arg("x"), py::arg("config") = StftConfig{});

  m.def("istft",
        [](const CArray<std::complex<double>>& spec, const StftConfig& cfg) {
          return to_array(istft(to_matrix(spec), cfg).samples);
        },
        py::arg("spec"), py::arg("config") = StftConfig{});

  m.def("nmf",
        [](const CArray<double>& z, std::size_t rank, std::size_t iters, double tol,
           std::uint64_t seed) {
          NmfProblem p{to_matrix(z), rank, {}, {}};
          const NmfState s = nmf_solve(p, NmfOptions{iters, tol, kDefaultEpsilon}, seed);
          return py::make_tuple(to_array(s.x), to_array(s.h),
                                to_array(s.objective_history));
        },
        py::arg("z"), py::arg("rank"), py::arg("iters") = 500, py::arg("tol") = 1e-6,
        py::arg("seed") = 0);

  m.def("cmf_factorize",
        [](const CArray<std::complex<double>>& z, std::size_t rank, std::size_t iters,
           double tol, std::uint64_t seed,
           std::optional<CArray<std::complex<double>>> fixed_x) {
          SepConfig cfg;
          cfg.rank = rank;
          cfg.iters = iters;
          cfg.tol = tol;
          cfg.seed = seed;
          std::optional<ComplexMatrix> fx;
          if (fixed_x) fx = to_matrix(*fixed_x);
          CmfResult r;
          {
            py::gil_scoped_release release;
            r = cmf_factorize(to_matrix(z), rank, cfg, fx);
          }
          return result_dict(r);
        },
        py::arg("z"), py::arg("rank"), py::arg("iters") = 500, py::arg("tol") = 1e-6,
        py::arg("seed") = 0, py::arg("fixed_x") = py::none());

  m.def("split_complex",
        [](const CArray<std::complex<double>>& z) {
          const SplitQuad q = split_complex(to_matrix(z));
          return py::make_tuple(to_array(q.pr), to_array(q.nr), to_array(q.pi),
                                to_array(q.ni));
        },
        py::arg("z"));

  m.def("train_bases",
        [](const std::vector<CArray<double>>& signals, const std::string& speaker_id,
           std::size_t rank, std::size_t iters, double tol, std::uint64_t seed,
           const StftConfig& stft_cfg) {
          std::vector<Signal> sigs;
          for (const auto& s : signals) sigs.push_back(to_signal(s, stft_cfg.sample_rate));
          SepConfig cfg;
          cfg.rank = rank;
          cfg.iters = iters;
          cfg.tol = tol;
          cfg.seed = seed;
          cfg.stft = stft_cfg;
          py::gil_scoped_release release;
          return train_bases(sigs, speaker_id, cfg);
        },
        py::arg("signals"), py::arg("speaker_id"), py::arg("rank") = 40,
        py::arg("iters") = 500, py::arg("tol") = 1e-6, py::arg("seed") = 0,
        py::arg("config") = StftConfig{});

  m.def("separate",
        [](const CArray<double>& mix, const BasisSet& a, const BasisSet& b,
           std::size_t iters, double tol, std::uint64_t seed) {
          SepConfig cfg;
          cfg.rank = a.rank() + b.rank();
          cfg.iters = iters;
          cfg.tol = tol;
          cfg.seed = seed;
          cfg.stft = a.stft;
          const Signal sig = to_signal(mix, a.stft.sample_rate);
          SeparationResult r;
          {
            py::gil_scoped_release release;
            r = separate(sig, a, b, cfg);
          }
          return py::make_tuple(to_array(r.source_i.samples),
                                to_array(r.source_j.samples));
        },
        py::arg("mix"), py::arg("bases_a"), py::arg("bases_b"), py::arg("iters") = 500,
        py::arg("tol") = 1e-6, py::arg("seed") = 0);

  m.def("evaluate",
        [](const CArray<double>& ref, const CArray<double>& est,
           const StftConfig& cfg) {
          const EvalReport r =
              evaluate(to_signal(ref, cfg.sample_rate), to_signal(est, cfg.sample_rate), cfg);
          py::dict d;
          d["correlation"] = r.correlation;
          d["tir_loss"] = r.tir_loss;
          d["tir_esc"] = r.tir_esc;
          d["snr_db"] = r.snr_db;
          d["pesq"] = py::none();
          d["tir_loss_definition"] = kTirLossDefinition;
          return d;
        },
        py::arg("ref"), py::arg("est"), py::arg("config") = StftConfig{});

  m.def("read_wav",
        [](const std::filesystem::path& path) {
          const WavFile w = read_wav(path);
          return py::make_tuple(to_array(w.samples.samples), w.samples.sample_rate);
        },
        py::arg("path"));

  m.def("write_wav",
        [](const std::filesystem::path& path, const CArray<double>& x,
           std::uint32_t sample_rate, const std::string& bit_depth) {
          if (bit_depth != "float32" && bit_depth != "pcm16")
            throw std::invalid_argument("bit_depth must be 'float32' or 'pcm16'");
          return write_wav(path, to_signal(x, sample_rate),
                           bit_depth == "pcm16" ? BitDepth::kPcm16 : BitDepth::kFloat32);
        },
        py::arg("path"), py::arg("x"), py::arg("sample_rate") = 16000,
        py::arg("bit_depth") = "float32");

  m.def("save_bases", &save_bases, py::arg("path"), py::arg("bases"));
  m.def("load_bases", &load_bases, py::arg("path"));
}
