// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#include "loralab/model/lora_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "loralab/errors.hpp"
#include "loralab/model/activation.hpp"
#include "loralab/numerics/losses.hpp"

namespace loralab::model {

namespace {

void require_length(std::span<const double> v, std::size_t n, const char* what) {
  if (v.size() != n) {
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(n) + ", got " +
                         std::to_string(v.size()));
  }
}

}  // namespace

LoraModel::LoraModel(Matrix w0, Matrix b, Matrix a, LoraOptions options)
    : w0_(std::move(w0)), b_(std::move(b)), a_(std::move(a)), options_(std::move(options)) {}

LoraModel LoraModel::init(Matrix w0, std::size_t rank, std::uint64_t seed, LoraOptions options) {
  if (w0.empty()) throw ArgumentError("lora_init: empty base weight");
  const std::size_t d = w0.rows();
  const std::size_t k = w0.cols();
  if (rank == 0 || rank > std::min(d, k)) {
    throw ArgumentError("lora_init: rank " + std::to_string(rank) + " outside [1, " +
                        std::to_string(std::min(d, k)) + "]");
  }
  if (!(options.lora_alpha > 0.0)) throw ArgumentError("lora_init: lora_alpha must be positive");
  if (!(options.dropout >= 0.0 && options.dropout < 1.0)) {
    throw ArgumentError("lora_init: dropout must lie in [0, 1)");
  }
  if (options.readout) {
    if (options.task != Task::kClassification) {
      throw ArgumentError("lora_init: a readout head needs a classification task");
    }
    if (options.readout->cols() != d || options.readout->rows() < 2) {
      throw DimensionError("lora_init: readout must be C x " + std::to_string(d) + " with C >= 2");
    }
  }
  numerics::Rng rng(numerics::derive_seed(seed, 0x6c6f7261ULL));
  Matrix a = numerics::kaiming_uniform(rng, k, rank, k);
  Matrix b(d, rank, 0.0);
  return LoraModel(std::move(w0), std::move(b), std::move(a), std::move(options));
}

std::size_t LoraModel::num_classes() const noexcept {
  return options_.readout ? options_.readout->rows() : output_dim();
}

Matrix LoraModel::delta() const { return numerics::scaled(numerics::matmul(b_, a_), scaling()); }

std::vector<double> LoraModel::forward(std::span<const double> x) const {
  return forward_pass(x).output;
}

ForwardPass LoraModel::forward_pass(std::span<const double> x, std::span<const double> base,
                                    numerics::Rng* dropout_rng) const {
  require_length(x, input_dim(), "forward");
  ForwardPass pass;
  if (base.empty()) {
    pass.output = numerics::matvec(w0_, x);
  } else {
    require_length(base, output_dim(), "forward base");
    pass.output.assign(base.begin(), base.end());
  }
  pass.hidden = numerics::matvec(a_, x);
  const double p = options_.dropout;
  if (dropout_rng != nullptr && p > 0.0) {
    pass.keep_scale.resize(rank());
    for (std::size_t i = 0; i < rank(); ++i) {
      pass.keep_scale[i] = dropout_rng->uniform(0.0, 1.0) < p ? 0.0 : 1.0 / (1.0 - p);
      pass.hidden[i] *= pass.keep_scale[i];
    }
  }
  const std::vector<double> lifted = numerics::matvec(b_, pass.hidden);
  const double s = scaling();
  for (std::size_t i = 0; i < pass.output.size(); ++i) pass.output[i] += s * lifted[i];
  return pass;
}

std::vector<double> LoraModel::logits_from_output(std::span<const double> output) const {
  require_length(output, output_dim(), "logits");
  if (!options_.readout) return {output.begin(), output.end()};
  std::vector<double> act(output.begin(), output.end());
  for (double& v : act) v = head_activation(v);
  return numerics::matvec(*options_.readout, act);
}

std::vector<double> LoraModel::logits(std::span<const double> x) const {
  return logits_from_output(forward(x));
}

LoraGrads LoraModel::zero_grads() const {
  return {Matrix(output_dim(), rank(), 0.0), Matrix(rank(), input_dim(), 0.0)};
}

void LoraModel::accumulate_backward(std::span<const double> x, const ForwardPass& pass,
                                    std::span<const double> g, double weight,
                                    LoraGrads& acc) const {
  require_length(x, input_dim(), "backward input");
  require_length(g, output_dim(), "backward upstream");
  const double s = scaling() * weight;
  numerics::add_outer(acc.b, s, g, pass.hidden);
  std::vector<double> through_b = numerics::matvec_transposed(b_, g);
  if (!pass.keep_scale.empty()) {
    for (std::size_t i = 0; i < through_b.size(); ++i) through_b[i] *= pass.keep_scale[i];
  }
  numerics::add_outer(acc.a, s, through_b, x);
}

LoraGrads LoraModel::backward(std::span<const double> x, std::span<const double> g) const {
  require_length(g, output_dim(), "backward upstream");
  const ForwardPass pass = forward_pass(x);
  LoraGrads grads = zero_grads();
  accumulate_backward(x, pass, g, 1.0, grads);
  return grads;
}

SampleLoss classification_loss(const LoraModel& model, const ForwardPass& pass, std::size_t label) {
  auto ce = numerics::softmax_cross_entropy(model.logits_from_output(pass.output), label);
  SampleLoss out;
  out.loss = ce.loss;
  if (!model.readout()) {
    out.output_grad = std::move(ce.grad);
    return out;
  }
  out.output_grad = numerics::matvec_transposed(*model.readout(), ce.grad);
  for (std::size_t i = 0; i < out.output_grad.size(); ++i) {
    out.output_grad[i] *= head_activation_grad(pass.output[i]);
  }
  return out;
}

SampleLoss regression_loss(const ForwardPass& pass, std::span<const double> target) {
  auto sq = numerics::squared_loss(pass.output, target);
  return {sq.loss, std::move(sq.grad)};
}

double sample_cross_entropy(const LoraModel& model, std::span<const double> x, std::size_t label,
                            std::span<const double> base) {
  const ForwardPass pass = model.forward_pass(x, base);
  return numerics::cross_entropy(model.logits_from_output(pass.output), label);
}

std::size_t predict(const LoraModel& model, std::span<const double> x) {
  return numerics::argmax(model.logits(x));
}

double accuracy(const LoraModel& model, const Matrix& x, std::span<const std::size_t> labels) {
  if (x.rows() != labels.size()) throw DimensionError("accuracy: label count differs from rows");
  if (labels.empty()) throw ArgumentError("accuracy: empty dataset");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < x.rows(); ++i) hits += predict(model, x.row(i)) == labels[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

Matrix base_outputs(const Matrix& w0, const Matrix& x) {
  if (x.cols() != w0.cols()) throw DimensionError("base_outputs: input width differs from w0");
  Matrix out(x.rows(), w0.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto y = numerics::matvec(w0, x.row(i));
    std::copy(y.begin(), y.end(), out.row(i).begin());
  }
  return out;
}

}  // namespace loralab::model
