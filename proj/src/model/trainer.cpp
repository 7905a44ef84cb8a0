// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#include "loralab/model/trainer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "loralab/errors.hpp"
#include "loralab/numerics/losses.hpp"

namespace loralab::model {

namespace {

constexpr std::uint64_t kShuffleStream = 0x73687566ULL;
constexpr std::uint64_t kDropoutStream = 0x64726f70ULL;

void check_compatible(const LoraModel& model, const data::NoisyDataset& data, const char* what) {
  if (data.size() == 0) throw ArgumentError(std::string(what) + ": empty dataset");
  if (data.input_dim() != model.input_dim()) {
    throw DimensionError(std::string(what) + ": dataset inputs have width " +
                         std::to_string(data.input_dim()) + ", model expects " +
                         std::to_string(model.input_dim()));
  }
  if (data.task != model.task()) throw ArgumentError(std::string(what) + ": task mismatch");
  if (data.task == Task::kClassification) {
    if (data.observed.size() != data.size()) throw DimensionError(std::string(what) + ": missing labels");
    if (data.num_classes > model.num_classes()) {
      throw DimensionError(std::string(what) + ": dataset has " + std::to_string(data.num_classes) +
                           " classes, model scores " + std::to_string(model.num_classes()));
    }
  } else if (!data.targets || data.targets->cols() != model.output_dim()) {
    throw DimensionError(std::string(what) + ": regression targets must have width " +
                         std::to_string(model.output_dim()));
  }
}

double mean_or_nan(double sum, std::size_t count) {
  return count == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / static_cast<double>(count);
}

}  // namespace

const EpochStats& TrainHistory::at(std::size_t t) const {
  if (t == 0) return initial;
  if (t > epochs.size()) throw ArgumentError("TrainHistory::at: epoch " + std::to_string(t) + " not recorded");
  return epochs[t - 1];
}

Trainer::Trainer(LoraModel& model, const data::NoisyDataset& data, TrainConfig cfg,
                 const data::NoisyDataset* eval, const Matrix* base_cache)
    : model_(model),
      data_(data),
      eval_(eval),
      cfg_(cfg),
      base_(base_cache),
      shuffle_rng_(numerics::derive_seed(cfg.seed, kShuffleStream)),
      dropout_rng_(numerics::derive_seed(cfg.seed, kDropoutStream)) {
  if (cfg_.epochs == 0) throw ArgumentError("train: epochs must be at least 1");
  if (cfg_.batch_size == 0) throw ArgumentError("train: batch_size must be at least 1");
  if (!(cfg_.learning_rate > 0.0)) throw ArgumentError("train: learning rate must be positive");
  check_compatible(model_, data_, "train");
  if (eval_ != nullptr) check_compatible(model_, *eval_, "train (eval set)");

  if (base_ == nullptr) {
    owned_base_ = std::make_unique<Matrix>(base_outputs(model_.w0(), data_.x));
    base_ = owned_base_.get();
  } else if (base_->rows() != data_.size() || base_->cols() != model_.output_dim()) {
    throw DimensionError("train: base cache shape does not match dataset and model");
  }

  numerics::AdamWOptions opts;
  opts.learning_rate = cfg_.learning_rate;
  opts.weight_decay = cfg_.weight_decay;
  opts.clip_norm = cfg_.clip_norm;
  state_b_ = numerics::AdamWState(model_.b().rows(), model_.b().cols(), opts);
  state_a_ = numerics::AdamWState(model_.a().rows(), model_.a().cols(), opts);
  grads_ = model_.zero_grads();
  order_.resize(data_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});

  history_.has_noisy = data_.noisy_count() > 0;
  history_.initial = evaluate(nullptr);
}

std::size_t Trainer::epoch_limit() const noexcept {
  return cfg_.early_stop_epoch ? std::min(cfg_.epochs, *cfg_.early_stop_epoch) : cfg_.epochs;
}

bool Trainer::finished() const noexcept { return epochs_done() >= epoch_limit(); }

void Trainer::run_epoch() {
  const std::size_t epoch = epochs_done() + 1;
  numerics::shuffle(shuffle_rng_, order_);
  const bool classify = data_.task == Task::kClassification;
  numerics::Rng* drop = model_.dropout() > 0.0 ? &dropout_rng_ : nullptr;
  if (cfg_.cosine_decay) {
    const double lr = cfg_.learning_rate * 0.5 *
                      (1.0 + std::cos(std::numbers::pi * static_cast<double>(epoch - 1) /
                                      static_cast<double>(cfg_.epochs)));
    state_b_.options.learning_rate = lr;
    state_a_.options.learning_rate = lr;
  }

  std::size_t batch_index = 0;
  for (std::size_t start = 0; start < order_.size(); start += cfg_.batch_size, ++batch_index) {
    const std::size_t stop = std::min(order_.size(), start + cfg_.batch_size);
    const double weight = 1.0 / static_cast<double>(stop - start);
    grads_.b.fill(0.0);
    grads_.a.fill(0.0);
    for (std::size_t p = start; p < stop; ++p) {
      const std::size_t i = order_[p];
      const auto x = data_.x.row(i);
      const ForwardPass pass = model_.forward_pass(x, base_->row(i), drop);
      const SampleLoss sl = classify ? classification_loss(model_, pass, data_.observed[i])
                                     : regression_loss(pass, data_.targets->row(i));
      if (!std::isfinite(sl.loss)) {
        throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                           std::to_string(batch_index));
      }
      model_.accumulate_backward(x, pass, sl.output_grad, weight, grads_);
    }
    const std::array<numerics::ParamSlot, 2> group{
        numerics::ParamSlot{&model_.b(), &grads_.b, &state_b_},
        numerics::ParamSlot{&model_.a(), &grads_.a, &state_a_},
    };
    try {
      numerics::adamw_step(group);
    } catch (const NumericError& e) {
      throw NumericError(std::string(e.what()) + " at epoch " + std::to_string(epoch) + ", batch " +
                         std::to_string(batch_index));
    }
  }

  const bool last = epochs_done() + 1 >= epoch_limit();
  std::vector<double> losses;
  const bool keep = last && cfg_.record_per_sample_losses;
  history_.epochs.push_back(evaluate(keep ? &losses : nullptr));
  if (keep) history_.per_sample_losses = std::move(losses);
}

EpochStats Trainer::evaluate(std::vector<double>* per_sample, bool with_eval) const {
  const bool classify = data_.task == Task::kClassification;
  double clean_sum = 0.0;
  double noisy_sum = 0.0;
  std::size_t clean_n = 0;
  std::size_t noisy_n = 0;
  std::size_t hits = 0;
  if (per_sample != nullptr) per_sample->resize(data_.size());

  for (std::size_t i = 0; i < data_.size(); ++i) {
    const ForwardPass pass = model_.forward_pass(data_.x.row(i), base_->row(i));
    double loss = 0.0;
    if (classify) {
      const auto logits = model_.logits_from_output(pass.output);
      loss = numerics::cross_entropy(logits, data_.observed[i]);
      hits += numerics::argmax(logits) == data_.observed[i] ? 1 : 0;
    } else {
      loss = numerics::squared_loss(pass.output, data_.targets->row(i)).loss;
    }
    if (!std::isfinite(loss)) {
      throw NumericError("train: non-finite loss while evaluating after epoch " +
                         std::to_string(epochs_done()));
    }
    if (per_sample != nullptr) (*per_sample)[i] = loss;
    const bool noisy = !data_.noise_mask.empty() && data_.noise_mask[i];
    (noisy ? noisy_sum : clean_sum) += loss;
    (noisy ? noisy_n : clean_n) += 1;
  }

  EpochStats stats;
  stats.clean_loss = mean_or_nan(clean_sum, clean_n);
  stats.noisy_loss = mean_or_nan(noisy_sum, noisy_n);
  stats.mean_loss = (clean_sum + noisy_sum) / static_cast<double>(data_.size());
  stats.train_accuracy = classify ? static_cast<double>(hits) / static_cast<double>(data_.size())
                                  : std::numeric_limits<double>::quiet_NaN();
  if (with_eval && eval_ != nullptr && classify) stats.eval_accuracy = accuracy(model_, eval_->x, eval_->observed);
  return stats;
}

std::vector<double> Trainer::sample_losses() const {
  std::vector<double> losses;
  evaluate(&losses, false);
  return losses;
}

TrainHistory Trainer::take_history() { return std::move(history_); }

TrainHistory train(LoraModel& model, const data::NoisyDataset& data, const TrainConfig& cfg,
                   const data::NoisyDataset* eval) {
  Trainer trainer(model, data, cfg, eval);
  while (!trainer.finished()) trainer.run_epoch();
  return trainer.take_history();
}

}  // namespace loralab::model
