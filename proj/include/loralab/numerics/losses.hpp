// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "loralab/numerics/matrix.hpp"

namespace loralab::numerics {

struct LossAndGrad {
  double loss = 0.0;
  std::vector<double> grad;
};

/// -log softmax(logits)[label] and its gradient softmax - onehot(label).
/// Needs at least two classes; throws ArgumentError for an out-of-range label.
LossAndGrad softmax_cross_entropy(std::span<const double> logits, std::size_t label);

/// Loss only, same stabilized evaluation as softmax_cross_entropy.
double cross_entropy(std::span<const double> logits, std::size_t label);

/// Mean squared difference and its gradient 2(pred - target)/len.
LossAndGrad squared_loss(std::span<const double> pred, std::span<const double> target);

/// Central differences (f(x + h e_ij) - f(x - h e_ij)) / 2h for every entry.
Matrix finite_difference_gradient(const std::function<double(const Matrix&)>& f, const Matrix& x,
                                  double h);

}  // namespace loralab::numerics
