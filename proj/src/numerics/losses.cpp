// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#include "loralab/numerics/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "loralab/errors.hpp"

namespace loralab::numerics {

namespace {

void check_logits(std::span<const double> logits, std::size_t label) {
  if (logits.size() < 2) throw ArgumentError("cross entropy: need at least two classes");
  if (label >= logits.size()) {
    throw ArgumentError("cross entropy: label " + std::to_string(label) + " out of range [0, " +
                        std::to_string(logits.size()) + ")");
  }
  for (double v : logits) {
    if (!std::isfinite(v)) throw NumericError("cross entropy: non-finite logit");
  }
}

// log-sum-exp with max subtraction
double log_partition(std::span<const double> logits, double max_logit) {
  double sum = 0.0;
  for (double v : logits) sum += std::exp(v - max_logit);
  return max_logit + std::log(sum);
}

}  // namespace

LossAndGrad softmax_cross_entropy(std::span<const double> logits, std::size_t label) {
  check_logits(logits, label);
  const double max_logit = *std::max_element(logits.begin(), logits.end());
  const double lse = log_partition(logits, max_logit);
  LossAndGrad out;
  out.loss = lse - logits[label];
  out.grad.resize(logits.size());
  for (std::size_t c = 0; c < logits.size(); ++c) out.grad[c] = std::exp(logits[c] - lse);
  out.grad[label] -= 1.0;
  return out;
}

double cross_entropy(std::span<const double> logits, std::size_t label) {
  check_logits(logits, label);
  const double max_logit = *std::max_element(logits.begin(), logits.end());
  return log_partition(logits, max_logit) - logits[label];
}

LossAndGrad squared_loss(std::span<const double> pred, std::span<const double> target) {
  if (pred.size() != target.size()) {
    throw ArgumentError("squared_loss: length mismatch " + std::to_string(pred.size()) + " vs " +
                        std::to_string(target.size()));
  }
  if (pred.empty()) throw ArgumentError("squared_loss: empty input");
  const double n = static_cast<double>(pred.size());
  LossAndGrad out;
  out.grad.resize(pred.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double diff = pred[i] - target[i];
    sum += diff * diff;
    out.grad[i] = 2.0 * diff / n;
  }
  out.loss = sum / n;
  if (!std::isfinite(out.loss)) throw NumericError("squared_loss: non-finite result");
  return out;
}

Matrix finite_difference_gradient(const std::function<double(const Matrix&)>& f, const Matrix& x,
                                  double h) {
  if (!(h > 0.0)) throw ArgumentError("finite_difference_gradient: h must be positive");
  Matrix grad(x.rows(), x.cols());
  Matrix probe = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double original = probe.values()[i];
    probe.values()[i] = original + h;
    const double up = f(probe);
    probe.values()[i] = original - h;
    const double down = f(probe);
    probe.values()[i] = original;
    grad.values()[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

}  // namespace loralab::numerics
