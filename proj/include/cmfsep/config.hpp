// Copyright 2026 The cmfsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>

#include "cmfsep/nmf.hpp"
#include "cmfsep/stft.hpp"

namespace cmfsep {

/// Tunables shared by factorization, training and separation.
struct SepConfig {
  std::size_t rank = 40;
  std::size_t iters = 500;
  double tol = 1e-6;
  double epsilon = kDefaultEpsilon;
  std::uint64_t seed = 0;
  StftConfig stft;

  void validate() const;
  NmfOptions nmf_options() const { return {iters, tol, epsilon}; }
};

}  // namespace cmfsep
