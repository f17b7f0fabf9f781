// Copyright 2026 The cmfsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "cmfsep/nmf.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace cmfsep {

namespace {

bool all_nonnegative(const RealMatrix& m) {
  return std::ranges::all_of(m.data(), [](double v) { return v >= 0.0; });
}

void fill_uniform(RealMatrix& m, std::mt19937_64& rng, double epsilon) {
  // (ε, 1]: draw u in [0, 1) and flip it
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (double& v : m.data()) v = std::max(1.0 - dist(rng), epsilon);
}

// m ← m ⊙ num ⊘ max(den, ε)
void multiplicative_update(RealMatrix& m, const RealMatrix& num,
                           const RealMatrix& den, double epsilon) {
  auto md = m.data();
  auto nd = num.data();
  auto dd = den.data();
  for (std::size_t i = 0; i < md.size(); ++i)
    md[i] *= nd[i] / std::max(dd[i], epsilon);
}

}  // namespace

void NmfProblem::validate() const {
  if (z.empty()) throw std::invalid_argument("nmf: empty input matrix");
  if (rank == 0) throw std::invalid_argument("nmf: rank must be >= 1");
  if (!all_nonnegative(z))
    throw std::invalid_argument("nmf: input matrix has negative entries");
  if (fixed_x) {
    if (fixed_x->rows() != z.rows() || fixed_x->cols() != rank) {
      throw std::invalid_argument("nmf: fixed_x is " + shape_str(*fixed_x) +
                                  ", expected " + std::to_string(z.rows()) +
                                  "x" + std::to_string(rank));
    }
    if (!all_nonnegative(*fixed_x))
      throw std::invalid_argument("nmf: fixed_x has negative entries");
  }
}

NmfState nmf_init(const NmfProblem& problem, std::uint64_t seed,
                  double epsilon) {
  problem.validate();
  std::mt19937_64 rng(seed);
  NmfState state;
  state.x = RealMatrix(problem.z.rows(), problem.rank);
  state.h = RealMatrix(problem.rank, problem.z.cols());
  // X is drawn even when fixed so H sees the same stream either way
  fill_uniform(state.x, rng, epsilon);
  fill_uniform(state.h, rng, epsilon);
  if (problem.fixed_x) state.x = *problem.fixed_x;
  return state;
}

void nmf_step(NmfState& state, const NmfProblem& problem, double epsilon) {
  const RealMatrix& z = problem.z;
  if (state.x.rows() != z.rows() || state.h.cols() != z.cols() ||
      state.x.cols() != state.h.rows()) {
    throw std::invalid_argument("nmf_step: state " + shape_str(state.x) +
                                " * " + shape_str(state.h) +
                                " inconsistent with input " + shape_str(z));
  }
  if (!problem.fixed_x) {
    // X ← X ⊙ (Z Hᵀ) ⊘ (X H Hᵀ)
    const RealMatrix num = matmul_nt(z, state.h);
    const RealMatrix den = matmul(state.x, matmul_nt(state.h, state.h));
    multiplicative_update(state.x, num, den, epsilon);
  }
  // H ← H ⊙ (Xᵀ Z) ⊘ (Xᵀ X H)
  const RealMatrix num = matmul_tn(state.x, z);
  const RealMatrix den = matmul(matmul_tn(state.x, state.x), state.h);
  multiplicative_update(state.h, num, den, epsilon);
  if (problem.coupling) problem.coupling(state.h);
  state.objective_history.push_back(
      frobenius_dist_sq(z, matmul(state.x, state.h)));
}

NmfState nmf_solve(const NmfProblem& problem, NmfState state,
                   const NmfOptions& opts, const NmfObserver& observer) {
  problem.validate();
  if (opts.iters == 0) throw std::invalid_argument("nmf_solve: iters must be >= 1");
  for (std::size_t t = 0; t < opts.iters; ++t) {
    nmf_step(state, problem, opts.epsilon);
    if (observer) observer(t, state);
    if (std::isinf(opts.tol)) break;
    const auto& hist = state.objective_history;
    if (hist.size() >= 2) {
      const double prev = hist[hist.size() - 2];
      const double cur = hist.back();
      if (prev <= 0.0 || std::abs(prev - cur) / prev < opts.tol) break;
    }
  }
  return state;
}

NmfState nmf_solve(const NmfProblem& problem, const NmfOptions& opts,
                   std::uint64_t seed, const NmfObserver& observer) {
  return nmf_solve(problem, nmf_init(problem, seed, opts.epsilon), opts,
                   observer);
}

}  // namespace cmfsep
