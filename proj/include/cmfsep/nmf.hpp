// Copyright 2026 The cmfsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "cmfsep/tensor.hpp"

namespace cmfsep {

inline constexpr double kDefaultEpsilon = 1e-12;

/// Euclidean NMF problem Z ≈ X·H with Z, X, H entrywise nonnegative.
struct NmfProblem {
  RealMatrix z;
  std::size_t rank = 1;
  /// When set, X is held at this value and only H is updated.
  std::optional<RealMatrix> fixed_x;
  /// Runs on H after each multiplicative step, before the objective is
  /// recorded. Must keep H entrywise nonnegative.
  std::function<void(RealMatrix& h)> coupling;

  /// Throws std::invalid_argument on negative entries or inconsistent shapes.
  void validate() const;
};

struct NmfState {
  RealMatrix x;
  RealMatrix h;
  /// ‖Z − XH‖² after each completed step.
  std::vector<double> objective_history;
};

struct NmfOptions {
  std::size_t iters = 500;
  /// Stop once |f[t-1] − f[t]| / f[t-1] < tol. Infinity stops after one step.
  double tol = 1e-6;
  double epsilon = kDefaultEpsilon;
};

/// Uniform (ε, 1] initialization, deterministic in `seed`. X is copied from
/// problem.fixed_x when present.
NmfState nmf_init(const NmfProblem& problem, std::uint64_t seed,
                  double epsilon = kDefaultEpsilon);

/// One X update (skipped when X is fixed), one H update using the new X, the
/// coupling hook if any, then the objective is appended. Mutates `state`.
void nmf_step(NmfState& state, const NmfProblem& problem,
              double epsilon = kDefaultEpsilon);

/// Called after each step with the 0-based iteration index.
using NmfObserver = std::function<void(std::size_t iter, const NmfState&)>;

NmfState nmf_solve(const NmfProblem& problem, NmfState initial,
                   const NmfOptions& opts, const NmfObserver& observer = {});
NmfState nmf_solve(const NmfProblem& problem, const NmfOptions& opts,
                   std::uint64_t seed, const NmfObserver& observer = {});

}  // namespace cmfsep
