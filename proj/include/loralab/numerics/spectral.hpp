// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "loralab/numerics/matrix.hpp"

namespace loralab::numerics {

struct SpectralResult {
  std::vector<double> values;  // descending
  bool converged = true;       // false if any value hit max_iter first
  std::size_t iterations = 0;  // total power iterations spent
};

/// The j largest singular values of m, by power iteration on the smaller Gram
/// matrix (mᵀm or mmᵀ) with deflation. A value counts as converged once the
/// eigen-residual ‖Gv - λv‖ drops below tol times the largest eigenvalue. Non-convergence is reported
/// through the flag, never thrown.
SpectralResult top_singular_values(const Matrix& m, std::size_t j, double tol = 1e-10,
                                   std::size_t max_iter = 1000);

}  // namespace loralab::numerics
