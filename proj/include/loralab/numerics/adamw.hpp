// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>

#include "loralab/numerics/matrix.hpp"

namespace loralab::numerics {

struct AdamWOptions {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.01;
  double clip_norm = 1.0;  // <= 0 disables clipping
};

/// Moment accumulators for one parameter matrix.
struct AdamWState {
  AdamWState() = default;
  AdamWState(std::size_t rows, std::size_t cols, AdamWOptions options);

  AdamWOptions options;
  Matrix first_moment;
  Matrix second_moment;
  std::uint64_t step = 0;
};

struct ParamSlot {
  Matrix* param;
  const Matrix* grad;
  AdamWState* state;
};

/// One AdamW step over a group of parameters that share a clipping budget:
/// gradients are rescaled so their joint L2 norm is at most clip_norm, then
/// each parameter takes a bias-corrected step with decoupled weight decay.
/// Every slot must share the learning rate and clip settings of the first.
/// Returns the joint gradient norm before clipping.
double adamw_step(std::span<const ParamSlot> group);

/// Single-parameter form; the clip applies to this gradient alone.
double adamw_step(Matrix& param, const Matrix& grad, AdamWState& state);

}  // namespace loralab::numerics
