// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#include "loralab/numerics/adamw.hpp"

#include <cmath>

#include "loralab/errors.hpp"
#include "loralab/kernels/kernels.hpp"

namespace loralab::numerics {

AdamWState::AdamWState(std::size_t rows, std::size_t cols, AdamWOptions opts)
    : options(opts), first_moment(rows, cols), second_moment(rows, cols) {
  if (!(opts.learning_rate > 0.0)) throw ArgumentError("AdamW: learning rate must be positive");
  if (!(opts.beta1 >= 0.0 && opts.beta1 < 1.0) || !(opts.beta2 >= 0.0 && opts.beta2 < 1.0)) {
    throw ArgumentError("AdamW: betas must lie in [0, 1)");
  }
  if (!(opts.epsilon > 0.0) || opts.weight_decay < 0.0) {
    throw ArgumentError("AdamW: epsilon must be positive and weight decay non-negative");
  }
}

double adamw_step(std::span<const ParamSlot> group) {
  if (group.empty()) return 0.0;
  const auto& k = kernels::active();
  const AdamWOptions& lead = group.front().state->options;

  double norm_sq = 0.0;
  for (const ParamSlot& slot : group) {
    const Matrix& g = *slot.grad;
    const AdamWState& s = *slot.state;
    if (g.rows() != slot.param->rows() || g.cols() != slot.param->cols() ||
        s.first_moment.rows() != g.rows() || s.first_moment.cols() != g.cols()) {
      throw ArgumentError("adamw_step: parameter, gradient and state shapes differ");
    }
    if (s.options.learning_rate != lead.learning_rate || s.options.clip_norm != lead.clip_norm) {
      throw ArgumentError("adamw_step: group members disagree on learning rate or clip norm");
    }
    if (!g.all_finite()) throw NumericError("adamw_step: non-finite gradient");
    norm_sq += k.sum_squares(g.data(), g.size());
  }
  const double norm = std::sqrt(norm_sq);
  const double grad_scale = (lead.clip_norm > 0.0 && norm > lead.clip_norm) ? lead.clip_norm / norm : 1.0;

  for (const ParamSlot& slot : group) {
    AdamWState& s = *slot.state;
    s.step += 1;
    const double t = static_cast<double>(s.step);
    kernels::AdamWCoefficients c{
        s.options.learning_rate,
        s.options.beta1,
        s.options.beta2,
        s.options.epsilon,
        s.options.weight_decay,
        grad_scale,
        1.0 - std::pow(s.options.beta1, t),
        1.0 - std::pow(s.options.beta2, t),
    };
    k.adamw_update(c, slot.param->data(), slot.grad->data(), s.first_moment.data(),
                   s.second_moment.data(), slot.param->size());
  }
  return norm;
}

double adamw_step(Matrix& param, const Matrix& grad, AdamWState& state) {
  const ParamSlot slot{&param, &grad, &state};
  return adamw_step(std::span<const ParamSlot>(&slot, 1));
}

}  // namespace loralab::numerics
