// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "loralab/data/task.hpp"
#include "loralab/model/trainer.hpp"
#include "loralab/ract/ract.hpp"

namespace loralab::theory {

struct Aggregate {
  double mean = 0.0;
  std::optional<double> std;  // sample standard deviation; absent for one value
  std::size_t count = 0;
};

Aggregate aggregate(std::span<const double> values);

/// Middle value, or the mean of the two middle values for even counts.
double median(std::span<const double> values);

struct SweepConfig {
  data::TaskSpec task;
  std::vector<std::size_t> ranks;
  std::vector<double> noise_rates;
  std::vector<std::uint64_t> seeds;
  model::TrainConfig train;
  double lora_alpha = 16.0;
  double dropout = 0.0;
  std::size_t jobs = 1;
};

struct SweepRecord {
  std::size_t rank = 0;
  double noise_rate = 0.0;
  std::uint64_t seed = 0;
  double final_train_acc = 0.0;  // against observed labels
  double eval_acc = 0.0;         // against clean held-out labels
  double eval_err = 0.0;
  double clean_loss = 0.0;
  double noisy_loss = 0.0;
  double bias_proxy = 0.0;  // teacher tail energy beyond the rank; NaN without a teacher
};

struct SweepPoint {
  std::size_t rank = 0;
  double noise_rate = 0.0;
  Aggregate train_acc;
  Aggregate eval_err;
};

struct ArgminRecord {
  double noise_rate = 0.0;
  std::uint64_t seed = 0;
  std::size_t rank = 0;
};

struct SweepResult {
  std::vector<std::size_t> ranks;
  std::vector<double> noise_rates;
  std::vector<std::uint64_t> seeds;
  std::vector<SweepRecord> records;  // rank outer, noise rate, seed inner
  std::vector<SweepPoint> points;    // rank outer, noise rate inner
  std::vector<ArgminRecord> argmins;  // eval-error argmin per (noise rate, seed)

  /// Median over seeds of the argmin rank at one noise rate.
  double median_argmin(double noise_rate) const;
  /// Median over seeds of final train accuracy at one cell.
  double median_train_acc(std::size_t rank, double noise_rate) const;
};

/// Trains a fresh adapter per (rank, noise rate, seed) for the full epoch budget.
SweepResult memorization_sweep(const SweepConfig& cfg);

/// Same grid; eval error on clean held-out labels and its argmin rank.
/// Requires a teacher task.
SweepResult rank_tradeoff_sweep(const SweepConfig& cfg);

struct TemporalConfig {
  data::TaskSpec task;
  std::size_t rank = 16;       // tracked adapter
  std::size_t reference_rank = 2;  // low-rank partner for detection F1
  ract::RactConfig ract;      // phase1 budget and threshold rule
  std::vector<std::uint64_t> seeds;
  std::size_t jobs = 1;
};

struct TemporalRecord {
  std::size_t epoch = 0;
  std::uint64_t seed = 0;
  double clean_loss = 0.0;
  double noisy_loss = 0.0;
  double train_acc = 0.0;
  double detect_f1 = 0.0;
};

struct TemporalSeedSummary {
  std::uint64_t seed = 0;
  std::optional<std::size_t> t_star;
  std::optional<std::size_t> clean_half_life;
  std::optional<std::size_t> noisy_half_life;
};

struct TemporalResult {
  std::vector<TemporalRecord> records;  // seed outer, epoch inner
  std::vector<TemporalSeedSummary> summaries;
};

/// Per-epoch clean/noisy losses of the tracked adapter, with the detection F1
/// of the discrepancy against the reference adapter after each epoch.
TemporalResult temporal_run(const TemporalConfig& cfg);

}  // namespace loralab::theory
