// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "loralab/data/dataset.hpp"
#include "loralab/numerics/matrix.hpp"
#include "loralab/numerics/rng.hpp"

namespace loralab::model {

using data::Task;
using numerics::Matrix;

struct LoraOptions {
  double lora_alpha = 16.0;
  double dropout = 0.0;
  Task task = Task::kClassification;
  // Frozen C x d head applied as readout * relu(adapted output). Without it,
  // a classifier reads its d adapted outputs directly as logits.
  std::optional<Matrix> readout;
};

struct LoraGrads {
  Matrix b;  // d x r
  Matrix a;  // r x k
};

/// Intermediate values of one forward pass, kept for the backward pass.
struct ForwardPass {
  std::vector<double> hidden;      // a x after dropout, length r
  std::vector<double> keep_scale;  // per rank entry: 0 or 1/(1-p); empty in eval mode
  std::vector<double> output;      // adapted output (w0 + s b a) x, length d
};

/// A frozen linear map w0 (d x k) plus a trainable low-rank update b a scaled
/// by lora_alpha / r.
class LoraModel {
 public:
  /// a ~ kaiming_uniform(fan_in = k), b = 0. Throws ArgumentError unless
  /// 1 <= rank <= min(d, k).
  static LoraModel init(Matrix w0, std::size_t rank, std::uint64_t seed, LoraOptions options = {});

  const Matrix& w0() const noexcept { return w0_; }
  const Matrix& b() const noexcept { return b_; }
  const Matrix& a() const noexcept { return a_; }
  Matrix& b() noexcept { return b_; }
  Matrix& a() noexcept { return a_; }
  const std::optional<Matrix>& readout() const noexcept { return options_.readout; }

  std::size_t rank() const noexcept { return a_.rows(); }
  std::size_t input_dim() const noexcept { return w0_.cols(); }
  std::size_t output_dim() const noexcept { return w0_.rows(); }
  std::size_t num_classes() const noexcept;
  double lora_alpha() const noexcept { return options_.lora_alpha; }
  double scaling() const noexcept { return options_.lora_alpha / static_cast<double>(rank()); }
  double dropout() const noexcept { return options_.dropout; }
  Task task() const noexcept { return options_.task; }

  /// Dense s * b a.
  Matrix delta() const;

  /// Adapted output in evaluation mode.
  std::vector<double> forward(std::span<const double> x) const;

  /// Training-mode pass. `base` is an optional precomputed w0 x; `dropout_rng`
  /// enables dropout on a x when the model has p > 0.
  ForwardPass forward_pass(std::span<const double> x, std::span<const double> base = {},
                           numerics::Rng* dropout_rng = nullptr) const;

  /// Class scores: readout * relu(output) with a readout, the output otherwise.
  std::vector<double> logits_from_output(std::span<const double> output) const;
  std::vector<double> logits(std::span<const double> x) const;

  /// Gradients of a scalar loss with upstream g = dL/d(output):
  /// grad_b = s g hᵀ, grad_a = s (bᵀg) xᵀ with h = a x. Evaluation mode.
  LoraGrads backward(std::span<const double> x, std::span<const double> g) const;

  /// Adds weight * (grad_b, grad_a) for a recorded pass into `acc`.
  void accumulate_backward(std::span<const double> x, const ForwardPass& pass,
                           std::span<const double> g, double weight, LoraGrads& acc) const;

  LoraGrads zero_grads() const;

 private:
  LoraModel(Matrix w0, Matrix b, Matrix a, LoraOptions options);

  Matrix w0_;
  Matrix b_;
  Matrix a_;
  LoraOptions options_;
};

/// Per-sample loss and dL/d(output) for a recorded pass. Classification uses
/// cross-entropy against `label`; regression uses squared loss against `target`.
struct SampleLoss {
  double loss = 0.0;
  std::vector<double> output_grad;
};
SampleLoss classification_loss(const LoraModel& model, const ForwardPass& pass, std::size_t label);
SampleLoss regression_loss(const ForwardPass& pass, std::span<const double> target);

/// Evaluation-mode cross-entropy of one sample.
double sample_cross_entropy(const LoraModel& model, std::span<const double> x, std::size_t label,
                            std::span<const double> base = {});

/// argmax of the logits, lowest index on ties.
std::size_t predict(const LoraModel& model, std::span<const double> x);

/// Fraction of rows of x whose prediction equals the label.
double accuracy(const LoraModel& model, const Matrix& x, std::span<const std::size_t> labels);

/// w0 x for every row of x (n x d); shared by adapters over the same backbone.
Matrix base_outputs(const Matrix& w0, const Matrix& x);

}  // namespace loralab::model
