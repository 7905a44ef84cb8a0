// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "loralab/data/dataset.hpp"
#include "loralab/data/task.hpp"
#include "loralab/model/lora_model.hpp"
#include "loralab/model/trainer.hpp"

namespace loralab::ract {

enum class ThresholdMode { kFixed, kQuantile };

struct RactConfig {
  std::size_t r_low = 4;
  std::size_t r_high = 16;
  ThresholdMode threshold_mode = ThresholdMode::kFixed;
  double tau = 0.3;
  std::optional<double> eta_hat;  // required for kQuantile

  model::TrainConfig phase1;              // phase1.epochs caps E1
  bool auto_epochs = false;               // stop at t̂* of the high adapter + margin
  std::size_t epoch_margin = 2;
  std::size_t t_star_window = 3;
  double t_star_frac = 0.05;
  std::optional<std::size_t> low_epochs;  // stop the low adapter earlier
  std::size_t discrepancy_window = 1;     // trailing epochs averaged into d_i

  bool phase4 = true;
  model::TrainConfig phase4_train;
  bool baseline = false;      // also train a rank r_low adapter on all noisy data
  bool track_f1 = false;      // detection F1 after every phase-1 epoch

  double lora_alpha = 16.0;
  double dropout = 0.0;
};

struct DetectionMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  bool degenerate = false;  // some ratio was 0/0 and was reported as 0
};

struct Partition {
  std::vector<std::size_t> clean;
  std::vector<std::size_t> noisy;
};

struct ThresholdChoice {
  double tau = 0.3;
  bool fallback = false;  // all discrepancies equal; default tau used
};

struct RactResult {
  std::vector<double> discrepancies;
  std::vector<bool> predicted_noisy;
  DetectionMetrics metrics;
  std::size_t clean_count = 0;
  std::size_t noisy_count = 0;
  double tau = 0.0;
  bool tau_fallback = false;
  std::size_t epochs_high = 0;
  std::size_t epochs_low = 0;
  std::optional<std::size_t> t_star_high;
  std::optional<double> phase4_accuracy;
  bool phase4_skipped = false;  // enabled but the clean partition was empty
  std::optional<double> baseline_accuracy;
  double low_eval_accuracy = 0.0;  // phase-1 low-rank adapter on the eval set
  model::TrainHistory history_low;
  model::TrainHistory history_high;
  std::vector<double> f1_by_epoch;  // index 0 = before training
};

/// d_i = CE(high, x_i, ỹ_i) - CE(low, x_i, ỹ_i) in evaluation mode.
std::vector<double> rank_discrepancy(const model::LoraModel& low, const model::LoraModel& high,
                                     const data::NoisyDataset& ds);

/// noisy iff d_i <= -tau. Throws ArgumentError unless tau > 0.
Partition classify_samples(std::span<const double> d, double tau);

/// tau = -(floor(eta_hat n)-th smallest d), floored at 1e-6.
ThresholdChoice auto_threshold(std::span<const double> d, double eta_hat);

DetectionMetrics detection_metrics(const std::vector<bool>& predicted_noisy,
                                   const std::vector<bool>& noise_mask);

/// Runs phases 1 to 4 on task.train; the phase-4 and baseline accuracies are
/// measured on task.eval.
RactResult ract_run(const data::TaskData& task, const RactConfig& cfg, std::uint64_t seed);

struct ThresholdRow {
  double tau = 0.0;
  DetectionMetrics metrics;
};

std::vector<ThresholdRow> threshold_sweep(std::span<const double> d, const std::vector<bool>& noise_mask,
                                          std::span<const double> taus);

struct RankGapRecord {
  std::size_t r_low = 0;
  std::size_t r_high = 0;
  std::uint64_t seed = 0;
  double accuracy = 0.0;  // phase-4 eval accuracy, NaN when phase 4 did not run
  double f1 = 0.0;
};

/// One ract_run per (pair, seed), pairs outer, seeds inner.
std::vector<RankGapRecord> rank_gap_sweep(const data::TaskSpec& task,
                                          std::span<const std::pair<std::size_t, std::size_t>> pairs,
                                          const RactConfig& base, std::span<const std::uint64_t> seeds,
                                          std::size_t jobs = 1);

}  // namespace loralab::ract
