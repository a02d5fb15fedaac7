// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace qotm {

// Tensor-factor / matrix shape mismatches.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Violated structural preconditions (non-Hermitian input, empty protocol, ...).
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Out-of-range scalar parameters (beta <= 0, insufficient Fock cutoff, ...).
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace qotm
