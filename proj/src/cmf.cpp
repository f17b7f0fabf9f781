// Copyright 2026 The cmfsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "cmfsep/cmf.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

namespace cmfsep {

namespace {

void require_same_shape(const RealMatrix& a, const RealMatrix& b,
                        const char* what) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch " +
                                shape_str(a) + " vs " + shape_str(b));
  }
}

RealMatrix add(const RealMatrix& a, const RealMatrix& b) {
  require_same_shape(a, b, "add");
  RealMatrix out = a;
  auto o = out.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] += bd[i];
  return out;
}

RealMatrix subtract(const RealMatrix& a, const RealMatrix& b) {
  require_same_shape(a, b, "subtract");
  RealMatrix out = a;
  auto o = out.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] -= bd[i];
  return out;
}

void fill_uniform(RealMatrix& m, std::mt19937_64& rng, double epsilon) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (double& v : m.data()) v = std::max(1.0 - dist(rng), epsilon);
}

}  // namespace

RealMatrix BlockMatrix::assembled() const {
  if (b11.rows() != b12.rows() || b21.rows() != b22.rows() ||
      b11.cols() != b21.cols() || b12.cols() != b22.cols()) {
    throw std::invalid_argument("BlockMatrix: blocks are not conformable (" +
                                shape_str(b11) + ", " + shape_str(b12) + ", " +
                                shape_str(b21) + ", " + shape_str(b22) + ")");
  }
  const std::size_t top = b11.rows();
  const std::size_t left = b11.cols();
  RealMatrix out(top + b21.rows(), left + b12.cols());
  for (std::size_t i = 0; i < top; ++i) {
    for (std::size_t j = 0; j < left; ++j) out(i, j) = b11(i, j);
    for (std::size_t j = 0; j < b12.cols(); ++j) out(i, left + j) = b12(i, j);
  }
  for (std::size_t i = 0; i < b21.rows(); ++i) {
    for (std::size_t j = 0; j < left; ++j) out(top + i, j) = b21(i, j);
    for (std::size_t j = 0; j < b22.cols(); ++j)
      out(top + i, left + j) = b22(i, j);
  }
  return out;
}

BlockMatrix BlockMatrix::from_assembled(const RealMatrix& m,
                                        std::size_t top_rows,
                                        std::size_t left_cols) {
  if (top_rows == 0 || left_cols == 0 || top_rows >= m.rows() ||
      left_cols >= m.cols()) {
    throw std::invalid_argument("BlockMatrix: cannot cut " + shape_str(m) +
                                " at (" + std::to_string(top_rows) + ", " +
                                std::to_string(left_cols) + ")");
  }
  const std::size_t bottom = m.rows() - top_rows;
  const std::size_t right = m.cols() - left_cols;
  const RealMatrix upper = row_slice(m, 0, top_rows);
  const RealMatrix lower = row_slice(m, top_rows, bottom);
  return {col_slice(upper, 0, left_cols), col_slice(upper, left_cols, right),
          col_slice(lower, 0, left_cols), col_slice(lower, left_cols, right)};
}

SplitQuad split_complex(const ComplexMatrix& z) {
  SplitQuad q{RealMatrix(z.rows(), z.cols()), RealMatrix(z.rows(), z.cols()),
              RealMatrix(z.rows(), z.cols()), RealMatrix(z.rows(), z.cols())};
  auto src = z.data();
  auto pr = q.pr.data();
  auto nr = q.nr.data();
  auto pi = q.pi.data();
  auto ni = q.ni.data();
  for (std::size_t k = 0; k < src.size(); ++k) {
    const double re = src[k].real();
    const double im = src[k].imag();
    // one of each pair stays exactly +0.0
    if (re > 0.0) pr[k] = re; else if (re < 0.0) nr[k] = -re;
    if (im > 0.0) pi[k] = im; else if (im < 0.0) ni[k] = -im;
  }
  return q;
}

ComplexMatrix merge_quad(const SplitQuad& q) {
  require_same_shape(q.pr, q.nr, "merge_quad");
  require_same_shape(q.pr, q.pi, "merge_quad");
  require_same_shape(q.pr, q.ni, "merge_quad");
  return make_complex(subtract(q.pr, q.nr), subtract(q.pi, q.ni));
}

BlockMatrix assemble_zc(const SplitQuad& q) {
  require_same_shape(q.pr, q.nr, "assemble_zc");
  require_same_shape(q.pi, q.ni, "assemble_zc");
  return {q.pr, q.nr, q.pi, q.ni};
}

BlockMatrix assemble_hc(const RealMatrix& h_plus, const RealMatrix& h_minus) {
  require_same_shape(h_plus, h_minus, "assemble_hc");
  return {h_plus, h_minus, h_minus, h_plus};
}

std::array<RealMatrix, 4> block_product_identity_check(
    const SplitQuad& x, const RealMatrix& h_plus, const RealMatrix& h_minus) {
  require_same_shape(h_plus, h_minus, "block_product_identity_check");
  return {add(matmul(x.pr, h_plus), matmul(x.nr, h_minus)),
          add(matmul(x.pr, h_minus), matmul(x.nr, h_plus)),
          add(matmul(x.pi, h_plus), matmul(x.ni, h_minus)),
          add(matmul(x.pi, h_minus), matmul(x.ni, h_plus))};
}

SymmetricH symmetrize_h(const RealMatrix& h1, const RealMatrix& h2,
                        const RealMatrix& h3, const RealMatrix& h4) {
  require_same_shape(h1, h4, "symmetrize_h");
  require_same_shape(h2, h3, "symmetrize_h");
  require_same_shape(h1, h2, "symmetrize_h");
  SymmetricH out{RealMatrix(h1.rows(), h1.cols()),
                 RealMatrix(h1.rows(), h1.cols())};
  auto a = h1.data(), b = h2.data(), c = h3.data(), d = h4.data();
  auto hp = out.h_plus.data();
  auto hm = out.h_minus.data();
  for (std::size_t k = 0; k < hp.size(); ++k) {
    hp[k] = (a[k] + d[k]) / 2.0;
    hm[k] = (b[k] + c[k]) / 2.0;
  }
  return out;
}

void symmetrize_hc(RealMatrix& hc, std::size_t rank, std::size_t cols) {
  if (hc.rows() != 2 * rank || hc.cols() != 2 * cols) {
    throw std::invalid_argument("symmetrize_hc: H_c is " + shape_str(hc) +
                                ", expected " + std::to_string(2 * rank) + "x" +
                                std::to_string(2 * cols));
  }
  for (std::size_t i = 0; i < rank; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double plus = (hc(i, j) + hc(rank + i, cols + j)) / 2.0;
      const double minus = (hc(i, cols + j) + hc(rank + i, j)) / 2.0;
      hc(i, j) = plus;
      hc(rank + i, cols + j) = plus;
      hc(i, cols + j) = minus;
      hc(rank + i, j) = minus;
    }
  }
}

ComplexFactors reassemble(const RealMatrix& xc, const RealMatrix& hc,
                          std::size_t rows, std::size_t rank,
                          std::size_t cols) {
  if (xc.rows() != 2 * rows || xc.cols() != 2 * rank ||
      hc.rows() != 2 * rank || hc.cols() != 2 * cols) {
    throw std::invalid_argument("reassemble: block factors " + shape_str(xc) +
                                ", " + shape_str(hc) + " do not match " +
                                std::to_string(rows) + "x" +
                                std::to_string(rank) + "x" +
                                std::to_string(cols));
  }
  ComplexFactors out{ComplexMatrix(rows, rank), RealMatrix(rank, cols)};
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < rank; ++j) {
      out.x(i, j) = Complex(xc(i, j) - xc(i, rank + j),
                            xc(rows + i, j) - xc(rows + i, rank + j));
    }
  }
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      out.h(i, j) = hc(i, j) - hc(i, cols + j);
  return out;
}

double CmfResult::relative_error_sq() const {
  if (input_norm_sq <= 0.0) return final_error > 0.0 ? 1.0 : 0.0;
  return final_error / input_norm_sq;
}

double CmfResult::relative_error() const {
  return std::sqrt(relative_error_sq());
}

CmfResult cmf_factorize(const ComplexMatrix& z, std::size_t rank,
                        const SepConfig& cfg,
                        const std::optional<ComplexMatrix>& fixed_x,
                        const CmfHooks& hooks) {
  if (z.empty()) throw std::invalid_argument("cmf_factorize: empty input");
  if (rank == 0) throw std::invalid_argument("cmf_factorize: rank must be >= 1");
  if (cfg.iters == 0)
    throw std::invalid_argument("cmf_factorize: iters must be >= 1");
  if (fixed_x && (fixed_x->rows() != z.rows() || fixed_x->cols() != rank)) {
    throw std::invalid_argument("cmf_factorize: fixed bases are " +
                                shape_str(*fixed_x) + ", expected " +
                                std::to_string(z.rows()) + "x" +
                                std::to_string(rank));
  }
  const std::size_t rows = z.rows();
  const std::size_t cols = z.cols();
  if (hooks.initial_h &&
      (hooks.initial_h->h_plus.rows() != rank ||
       hooks.initial_h->h_plus.cols() != cols ||
       !hooks.initial_h->h_plus.same_shape(hooks.initial_h->h_minus))) {
    throw std::invalid_argument("cmf_factorize: initial H must be " +
                                std::to_string(rank) + "x" +
                                std::to_string(cols));
  }

  CmfResult result;
  result.input_norm_sq = frobenius_norm_sq(z);
  if (result.input_norm_sq == 0.0) {
    result.x = fixed_x ? *fixed_x : ComplexMatrix(rows, rank);
    result.h = RealMatrix(rank, cols);
    result.final_error = 0.0;
    return result;
  }

  NmfProblem problem;
  problem.z = assemble_zc(split_complex(z)).assembled();
  problem.rank = 2 * rank;
  if (fixed_x) problem.fixed_x = assemble_zc(split_complex(*fixed_x)).assembled();
  problem.coupling = [rank, cols](RealMatrix& hc) {
    symmetrize_hc(hc, rank, cols);
  };

  // X₊ᵣ, X₋ᵣ, X₊ᵢ, X₋ᵢ then H₊, H₋, all uniform in (ε, 1]
  std::mt19937_64 rng(cfg.seed);
  NmfState state;
  state.x = RealMatrix(2 * rows, 2 * rank);
  fill_uniform(state.x, rng, cfg.epsilon);
  if (problem.fixed_x) state.x = *problem.fixed_x;
  RealMatrix h_plus(rank, cols);
  RealMatrix h_minus(rank, cols);
  fill_uniform(h_plus, rng, cfg.epsilon);
  fill_uniform(h_minus, rng, cfg.epsilon);
  if (hooks.initial_h) {
    h_plus = hooks.initial_h->h_plus;
    h_minus = hooks.initial_h->h_minus;
  }
  state.h = assemble_hc(h_plus, h_minus).assembled();

  NmfObserver nmf_observer;
  if (hooks.observer) {
    nmf_observer = [&](std::size_t t, const NmfState& s) {
      CmfIterate it;
      it.iteration = t;
      it.block_objective = s.objective_history.back();
      it.xc = &s.x;
      it.hc = &s.h;
      if (hooks.checkpoint_every != 0 && (t + 1) % hooks.checkpoint_every == 0) {
        const auto f = reassemble(s.x, s.h, rows, rank, cols);
        it.complex_error = frobenius_dist_sq(z, complex_matmul_real(f.x, f.h));
      }
      hooks.observer(it);
    };
  }

  state = nmf_solve(problem, std::move(state), cfg.nmf_options(), nmf_observer);

  auto factors = reassemble(state.x, state.h, rows, rank, cols);
  result.final_error =
      frobenius_dist_sq(z, complex_matmul_real(factors.x, factors.h));
  if (fixed_x) factors.x = *fixed_x;
  result.x = std::move(factors.x);
  result.h = std::move(factors.h);
  result.objective_history = std::move(state.objective_history);
  return result;
}

CmfObserver make_iteration_logger(std::ostream& out) {
  return [&out](const CmfIterate& it) {
    out << std::setprecision(17) << it.iteration << '\t' << it.block_objective << '\t';
    if (it.complex_error) out << *it.complex_error;
    out << '\n';
  };
}

}  // namespace cmfsep
