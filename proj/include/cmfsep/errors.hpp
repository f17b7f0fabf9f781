// Copyright 2026 The cmfsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <stdexcept>

namespace cmfsep {

/// Bad or incompatible input data (files, configs that disagree, silent
/// references). The CLI maps it to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cmfsep
