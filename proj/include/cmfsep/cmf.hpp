// Copyright 2026 The cmfsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "cmfsep/config.hpp"
#include "cmfsep/tensor.hpp"

namespace cmfsep {

/// Positive/negative parts of the real and imaginary components of a complex
/// matrix: z = (pr − nr) + j(pi − ni).
struct SplitQuad {
  RealMatrix pr;
  RealMatrix nr;
  RealMatrix pi;
  RealMatrix ni;
};

/// 2x2 arrangement [[b11, b12], [b21, b22]] of nonnegative blocks.
struct BlockMatrix {
  RealMatrix b11;
  RealMatrix b12;
  RealMatrix b21;
  RealMatrix b22;

  /// The stacked (b11.rows + b21.rows) x (b11.cols + b12.cols) matrix.
  RealMatrix assembled() const;
  /// Cut `m` into blocks with the given top-left block size.
  static BlockMatrix from_assembled(const RealMatrix& m, std::size_t top_rows,
                                    std::size_t left_cols);
};

SplitQuad split_complex(const ComplexMatrix& z);
ComplexMatrix merge_quad(const SplitQuad& q);

/// [[pr, nr], [pi, ni]]. Used for both the data matrix and the bases.
BlockMatrix assemble_zc(const SplitQuad& q);
/// [[h₊, h₋], [h₋, h₊]].
BlockMatrix assemble_hc(const RealMatrix& h_plus, const RealMatrix& h_minus);

/// The four block products
///   pr·h₊ + nr·h₋,  pr·h₋ + nr·h₊,  pi·h₊ + ni·h₋,  pi·h₋ + ni·h₊
/// computed term by term, without forming the block matrices.
std::array<RealMatrix, 4> block_product_identity_check(
    const SplitQuad& x_parts, const RealMatrix& h_plus,
    const RealMatrix& h_minus);

struct SymmetricH {
  RealMatrix h_plus;
  RealMatrix h_minus;
};

/// h₊ = (h1 + h4)/2, h₋ = (h2 + h3)/2.
SymmetricH symmetrize_h(const RealMatrix& h1, const RealMatrix& h2,
                        const RealMatrix& h3, const RealMatrix& h4);

/// In-place coupling on an assembled H_c of size 2·rank x 2·cols: afterwards
/// H1 = H4 and H2 = H3 bit-for-bit.
void symmetrize_hc(RealMatrix& hc, std::size_t rank, std::size_t cols);

struct ComplexFactors {
  ComplexMatrix x;
  RealMatrix h;
};

/// X = X1 − X2 + j(X3 − X4), H = H₊ − H₋ from the assembled block factors.
ComplexFactors reassemble(const RealMatrix& xc, const RealMatrix& hc,
                          std::size_t rows, std::size_t rank, std::size_t cols);

/// Snapshot handed to a CmfObserver after every iteration.
struct CmfIterate {
  std::size_t iteration = 0;
  double block_objective = 0.0;
  const RealMatrix* xc = nullptr;
  const RealMatrix* hc = nullptr;
  /// ‖Z − XH‖² of the reassembled factors, set at checkpoints only.
  std::optional<double> complex_error;
};

using CmfObserver = std::function<void(const CmfIterate&)>;

struct CmfHooks {
  CmfObserver observer;
  /// Complex-domain error is evaluated every `checkpoint_every` iterations
  /// (0 disables intermediate checkpoints).
  std::size_t checkpoint_every = 0;
  /// Overrides the random H₊/H₋ start (each rank x cols).
  std::optional<SymmetricH> initial_h;
};

struct CmfResult {
  ComplexMatrix x;
  RealMatrix h;
  /// Block objective ‖Z_c − X_c H_c‖² per iteration.
  std::vector<double> objective_history;
  /// ‖Z − XH‖².
  double final_error = 0.0;
  double input_norm_sq = 0.0;

  /// ‖Z − XH‖ / ‖Z‖.
  double relative_error() const;
  /// ‖Z − XH‖² / ‖Z‖².
  double relative_error_sq() const;
};

/// Factor a complex matrix as complex bases times real weights by running
/// Euclidean NMF on the split block problem with coupled H. With `fixed_x`
/// the bases are split once and held constant; only H is estimated.
CmfResult cmf_factorize(const ComplexMatrix& z, std::size_t rank,
                        const SepConfig& cfg,
                        const std::optional<ComplexMatrix>& fixed_x = {},
                        const CmfHooks& hooks = {});

/// Writes "iter<TAB>block_objective<TAB>complex_error" lines; the last column
/// is empty between checkpoints.
CmfObserver make_iteration_logger(std::ostream& out);

}  // namespace cmfsep
