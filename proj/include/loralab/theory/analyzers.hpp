// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "loralab/data/dataset.hpp"
#include "loralab/model/lora_model.hpp"
#include "loralab/model/trainer.hpp"

namespace loralab::theory {

/// First epoch t at which the loss falls by more than frac * loss[0] over the
/// next `window` epochs, i.e. loss[t] - loss[t + window] > frac * loss[0].
/// `loss[0]` is the value before training. Throws ArgumentError when the series
/// holds fewer than window + 1 points.
std::optional<std::size_t> estimate_t_star_empirical(std::span<const double> loss,
                                                     std::size_t window, double frac);

/// Same, on the noisy-label loss series of a training history.
std::optional<std::size_t> estimate_t_star_empirical(const model::TrainHistory& history,
                                                     std::size_t window, double frac);

/// First epoch whose loss is below half of loss[0]; nullopt if none.
std::optional<std::size_t> half_life_epoch(std::span<const double> loss);

/// Loss series (index 0 = before training) pulled out of a history.
std::vector<double> clean_loss_series(const model::TrainHistory& history);
std::vector<double> noisy_loss_series(const model::TrainHistory& history);

/// Per-sample cross-entropy gradients with respect to (b, a), flattened
/// row-major b then a, one row per sample.
numerics::Matrix per_sample_gradients(const model::LoraModel& model, const data::NoisyDataset& ds);

struct GradientSpectrum {
  double sigma_r = 0.0;
  std::vector<double> values;  // top-r eigenvalues of the gradient covariance
  bool converged = true;
};

/// r-th eigenvalue of the empirical covariance (1/m) Σ g gᵀ of per-sample
/// gradients over `clean`, computed as squared singular values of G / sqrt(m).
GradientSpectrum gradient_covariance_sigma_r(const model::LoraModel& model,
                                             const data::NoisyDataset& clean, std::size_t r);

}  // namespace loralab::theory
