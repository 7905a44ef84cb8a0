// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "loralab/data/dataset.hpp"
#include "loralab/model/lora_model.hpp"
#include "loralab/numerics/adamw.hpp"

namespace loralab::model {

struct TrainConfig {
  std::size_t epochs = 20;
  std::size_t batch_size = 64;
  double learning_rate = 1e-2;
  double weight_decay = 0.01;
  double clip_norm = 1.0;
  bool cosine_decay = false;  // per-epoch lr * (1 + cos(pi (t-1) / epochs)) / 2
  std::uint64_t seed = 42;
  bool record_per_sample_losses = false;
  std::optional<std::size_t> early_stop_epoch;  // stop after this epoch; none = run all epochs
};

/// Evaluation-mode snapshot taken after an epoch (or before the first one).
/// Losses are measured against the observed labels. noisy_loss is NaN when
/// the dataset has no corrupted samples.
struct EpochStats {
  double clean_loss = 0.0;
  double noisy_loss = 0.0;
  double mean_loss = 0.0;
  double train_accuracy = 0.0;  // against observed labels
  std::optional<double> eval_accuracy;
};

struct TrainHistory {
  EpochStats initial;              // before any update
  std::vector<EpochStats> epochs;  // one entry per completed epoch
  bool has_noisy = false;
  std::vector<double> per_sample_losses;  // after the last epoch, if recorded

  std::size_t epoch_count() const noexcept { return epochs.size(); }
  /// t = 0 is the initial snapshot, t = 1..epoch_count() the epochs.
  const EpochStats& at(std::size_t t) const;
};

/// Mini-batch AdamW over a dataset, one epoch at a time. Batches follow a
/// per-epoch shuffle drawn from cfg.seed, so two trainers built with the same
/// seed see the same sample order. The noise mask is read only to split the
/// recorded losses; it never affects an update.
class Trainer {
 public:
  /// `base_cache`, when given, must hold w0 x for every training row and
  /// outlive the trainer.
  Trainer(LoraModel& model, const data::NoisyDataset& data, TrainConfig cfg,
          const data::NoisyDataset* eval = nullptr, const Matrix* base_cache = nullptr);

  void run_epoch();
  bool finished() const noexcept;
  std::size_t epochs_done() const noexcept { return history_.epochs.size(); }
  std::size_t epoch_limit() const noexcept;

  const TrainHistory& history() const noexcept { return history_; }
  TrainHistory take_history();

  /// Current per-sample training losses against observed labels.
  std::vector<double> sample_losses() const;

 private:
  EpochStats evaluate(std::vector<double>* per_sample, bool with_eval = true) const;

  LoraModel& model_;
  const data::NoisyDataset& data_;
  const data::NoisyDataset* eval_;
  TrainConfig cfg_;
  std::unique_ptr<Matrix> owned_base_;
  const Matrix* base_;
  numerics::Rng shuffle_rng_;
  numerics::Rng dropout_rng_;
  numerics::AdamWState state_b_;
  numerics::AdamWState state_a_;
  LoraGrads grads_;
  std::vector<std::size_t> order_;
  TrainHistory history_;
};

/// Runs a Trainer to completion. Throws DimensionError when the model and data
/// disagree on shape, NumericError on a non-finite loss.
TrainHistory train(LoraModel& model, const data::NoisyDataset& data, const TrainConfig& cfg,
                   const data::NoisyDataset* eval = nullptr);

}  // namespace loralab::model
