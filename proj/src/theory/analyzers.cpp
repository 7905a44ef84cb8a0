// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#include "loralab/theory/analyzers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "loralab/errors.hpp"
#include "loralab/numerics/spectral.hpp"

namespace loralab::theory {

std::optional<std::size_t> estimate_t_star_empirical(std::span<const double> loss,
                                                     std::size_t window, double frac) {
  if (window == 0) throw ArgumentError("estimate_t_star_empirical: window must be at least 1");
  if (!(frac > 0.0 && frac < 1.0)) throw ArgumentError("estimate_t_star_empirical: frac must lie in (0, 1)");
  if (loss.size() < window + 1) {
    throw ArgumentError("estimate_t_star_empirical: series of " + std::to_string(loss.size()) +
                        " points is shorter than window + 1");
  }
  const double threshold = frac * loss[0];
  for (std::size_t t = 0; t + window < loss.size(); ++t) {
    if (loss[t] - loss[t + window] > threshold) return t;
  }
  return std::nullopt;
}

std::optional<std::size_t> estimate_t_star_empirical(const model::TrainHistory& history,
                                                     std::size_t window, double frac) {
  if (!history.has_noisy) throw ArgumentError("estimate_t_star_empirical: history has no noisy samples");
  return estimate_t_star_empirical(noisy_loss_series(history), window, frac);
}

std::optional<std::size_t> half_life_epoch(std::span<const double> loss) {
  if (loss.empty()) throw ArgumentError("half_life_epoch: empty series");
  for (std::size_t t = 1; t < loss.size(); ++t) {
    if (loss[t] < 0.5 * loss[0]) return t;
  }
  return std::nullopt;
}

std::vector<double> clean_loss_series(const model::TrainHistory& history) {
  std::vector<double> out{history.initial.clean_loss};
  for (const auto& e : history.epochs) out.push_back(e.clean_loss);
  return out;
}

std::vector<double> noisy_loss_series(const model::TrainHistory& history) {
  std::vector<double> out{history.initial.noisy_loss};
  for (const auto& e : history.epochs) out.push_back(e.noisy_loss);
  return out;
}

numerics::Matrix per_sample_gradients(const model::LoraModel& model, const data::NoisyDataset& ds) {
  if (ds.size() == 0) throw ArgumentError("per_sample_gradients: empty dataset");
  if (ds.input_dim() != model.input_dim()) throw DimensionError("per_sample_gradients: input width mismatch");
  const std::size_t nb = model.b().size();
  const std::size_t na = model.a().size();
  numerics::Matrix g(ds.size(), nb + na);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto x = ds.x.row(i);
    const model::ForwardPass pass = model.forward_pass(x);
    const model::SampleLoss sl = model::classification_loss(model, pass, ds.observed[i]);
    model::LoraGrads grads = model.zero_grads();
    model.accumulate_backward(x, pass, sl.output_grad, 1.0, grads);
    auto row = g.row(i);
    std::copy(grads.b.values().begin(), grads.b.values().end(), row.begin());
    std::copy(grads.a.values().begin(), grads.a.values().end(), row.begin() + static_cast<std::ptrdiff_t>(nb));
  }
  return g;
}

GradientSpectrum gradient_covariance_sigma_r(const model::LoraModel& model,
                                             const data::NoisyDataset& clean, std::size_t r) {
  if (clean.size() == 0) throw ArgumentError("gradient_covariance_sigma_r: empty clean subset");
  numerics::Matrix g = per_sample_gradients(model, clean);
  if (r == 0 || r > std::min(g.rows(), g.cols())) {
    throw ArgumentError("gradient_covariance_sigma_r: r=" + std::to_string(r) +
                        " exceeds the available spectrum of " +
                        std::to_string(std::min(g.rows(), g.cols())));
  }
  const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(g.rows()));
  for (double& v : g.values()) v *= inv_sqrt_m;
  const numerics::SpectralResult sv = numerics::top_singular_values(g, r);
  GradientSpectrum out;
  out.converged = sv.converged;
  out.values.reserve(r);
  for (double s : sv.values) out.values.push_back(s * s);
  out.sigma_r = out.values.back();
  return out;
}

}  // namespace loralab::theory
