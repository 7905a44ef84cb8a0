// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#include "loralab/ract/ract.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "loralab/errors.hpp"
#include "loralab/numerics/rng.hpp"
#include "loralab/parallel.hpp"
#include "loralab/theory/analyzers.hpp"

namespace loralab::ract {

namespace {

constexpr double kDefaultTau = 0.3;
constexpr double kTauFloor = 1e-6;
constexpr std::uint64_t kLowInitStream = 0x6c6f77ULL;
constexpr std::uint64_t kHighInitStream = 0x68696768ULL;
constexpr std::uint64_t kRetrainStream = 0x7265747261ULL;

double ratio(std::size_t num, std::size_t den, bool& degenerate) {
  if (den == 0) {
    degenerate = true;
    return 0.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

void validate(const RactConfig& cfg, const data::TaskData& task) {
  const std::size_t limit = std::min(task.w0.rows(), task.w0.cols());
  if (cfg.r_low == 0 || cfg.r_low >= cfg.r_high) {
    throw ArgumentError("ract: ranks must satisfy 0 < r_low < r_high, got r_low=" +
                        std::to_string(cfg.r_low) + ", r_high=" + std::to_string(cfg.r_high));
  }
  if (cfg.r_high > limit) {
    throw ArgumentError("ract: r_high=" + std::to_string(cfg.r_high) + " exceeds min(d, k)=" +
                        std::to_string(limit));
  }
  if (cfg.threshold_mode == ThresholdMode::kFixed && !(cfg.tau > 0.0)) {
    throw ArgumentError("ract: fixed threshold must be positive");
  }
  if (cfg.threshold_mode == ThresholdMode::kQuantile &&
      !(cfg.eta_hat && *cfg.eta_hat > 0.0 && *cfg.eta_hat < 1.0)) {
    throw ArgumentError("ract: quantile threshold needs eta_hat in (0, 1)");
  }
  if (cfg.discrepancy_window == 0) throw ArgumentError("ract: discrepancy_window must be at least 1");
  if (task.train.task != data::Task::kClassification) {
    throw ArgumentError("ract: classification data required");
  }
}

ThresholdChoice choose_threshold(const RactConfig& cfg, std::span<const double> d) {
  if (cfg.threshold_mode == ThresholdMode::kQuantile) return auto_threshold(d, *cfg.eta_hat);
  return ThresholdChoice{cfg.tau, false};
}

std::vector<bool> flags_for(std::span<const double> d, double tau) {
  std::vector<bool> out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out[i] = d[i] <= -tau;
  return out;
}

std::vector<double> difference(const std::vector<double>& high, const std::vector<double>& low) {
  std::vector<double> d(high.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = high[i] - low[i];
  return d;
}

std::vector<double> window_mean(const std::deque<std::vector<double>>& window) {
  std::vector<double> out(window.front().size(), 0.0);
  for (const auto& d : window) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += d[i];
  }
  const double inv = 1.0 / static_cast<double>(window.size());
  for (double& v : out) v *= inv;
  return out;
}

model::LoraOptions lora_options(const RactConfig& cfg, const data::TaskData& task) {
  model::LoraOptions opts;
  opts.lora_alpha = cfg.lora_alpha;
  opts.dropout = cfg.dropout;
  opts.readout = task.readout;
  return opts;
}

double retrain_accuracy(const data::TaskData& task, const data::NoisyDataset& train, const RactConfig& cfg,
                        std::uint64_t seed) {
  model::LoraModel m = model::LoraModel::init(task.w0, cfg.r_low, numerics::derive_seed(seed, kRetrainStream),
                                              lora_options(cfg, task));
  model::TrainConfig tc = cfg.phase4_train;
  tc.seed = seed;
  model::train(m, train, tc);
  return model::accuracy(m, task.eval.x, task.eval.observed);
}

}  // namespace

std::vector<double> rank_discrepancy(const model::LoraModel& low, const model::LoraModel& high,
                                     const data::NoisyDataset& ds) {
  if (low.input_dim() != high.input_dim() || low.num_classes() != high.num_classes()) {
    throw ArgumentError("rank_discrepancy: models disagree on input width or class count");
  }
  if (ds.input_dim() != low.input_dim()) {
    throw ArgumentError("rank_discrepancy: dataset width " + std::to_string(ds.input_dim()) +
                        " does not match model width " + std::to_string(low.input_dim()));
  }
  std::vector<double> d(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto x = ds.x.row(i);
    d[i] = model::sample_cross_entropy(high, x, ds.observed[i]) -
           model::sample_cross_entropy(low, x, ds.observed[i]);
  }
  return d;
}

Partition classify_samples(std::span<const double> d, double tau) {
  if (!(tau > 0.0)) throw ArgumentError("classify_samples: tau must be positive");
  Partition p;
  for (std::size_t i = 0; i < d.size(); ++i) (d[i] <= -tau ? p.noisy : p.clean).push_back(i);
  return p;
}

ThresholdChoice auto_threshold(std::span<const double> d, double eta_hat) {
  if (!(eta_hat > 0.0 && eta_hat < 1.0)) throw ArgumentError("auto_threshold: eta_hat must lie in (0, 1)");
  if (d.empty()) throw ArgumentError("auto_threshold: empty discrepancy vector");
  const auto [lo, hi] = std::minmax_element(d.begin(), d.end());
  if (*lo == *hi) return ThresholdChoice{kDefaultTau, true};
  const auto m = static_cast<std::size_t>(std::floor(eta_hat * static_cast<double>(d.size())));
  if (m == 0) return ThresholdChoice{std::max(-*lo, 0.0) + 1.0, false};
  std::vector<double> sorted(d.begin(), d.end());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(m - 1), sorted.end());
  return ThresholdChoice{std::max(-sorted[m - 1], kTauFloor), false};
}

DetectionMetrics detection_metrics(const std::vector<bool>& predicted_noisy,
                                   const std::vector<bool>& noise_mask) {
  if (predicted_noisy.size() != noise_mask.size()) {
    throw ArgumentError("detection_metrics: prediction and mask lengths differ");
  }
  DetectionMetrics m;
  for (std::size_t i = 0; i < noise_mask.size(); ++i) {
    if (predicted_noisy[i] && noise_mask[i]) ++m.true_positives;
    if (predicted_noisy[i] && !noise_mask[i]) ++m.false_positives;
    if (!predicted_noisy[i] && noise_mask[i]) ++m.false_negatives;
  }
  m.precision = ratio(m.true_positives, m.true_positives + m.false_positives, m.degenerate);
  m.recall = ratio(m.true_positives, m.true_positives + m.false_negatives, m.degenerate);
  const double pr = m.precision + m.recall;
  if (pr > 0.0) {
    m.f1 = 2.0 * m.precision * m.recall / pr;
  } else {
    m.f1 = 0.0;
    m.degenerate = true;
  }
  return m;
}

RactResult ract_run(const data::TaskData& task, const RactConfig& cfg, std::uint64_t seed) {
  validate(cfg, task);
  const data::NoisyDataset& train = task.train;
  const model::LoraOptions opts = lora_options(cfg, task);
  model::LoraModel low = model::LoraModel::init(task.w0, cfg.r_low,
                                                numerics::derive_seed(seed, kLowInitStream), opts);
  model::LoraModel high = model::LoraModel::init(task.w0, cfg.r_high,
                                                 numerics::derive_seed(seed, kHighInitStream), opts);
  const model::Matrix base = model::base_outputs(task.w0, train.x);

  model::TrainConfig tc = cfg.phase1;
  tc.seed = seed;
  tc.early_stop_epoch.reset();
  model::TrainConfig tc_low = tc;
  if (cfg.low_epochs) tc_low.epochs = std::min(tc.epochs, *cfg.low_epochs);

  model::Trainer trainer_low(low, train, tc_low, &task.eval, &base);
  model::Trainer trainer_high(high, train, tc, nullptr, &base);

  RactResult result;
  const bool every_epoch = cfg.track_f1 || cfg.discrepancy_window > 1;
  std::deque<std::vector<double>> window;
  auto snapshot = [&] {
    std::vector<double> d = difference(trainer_high.sample_losses(), trainer_low.sample_losses());
    if (cfg.track_f1) {
      const ThresholdChoice choice = choose_threshold(cfg, d);
      result.f1_by_epoch.push_back(detection_metrics(flags_for(d, choice.tau), train.noise_mask).f1);
    }
    window.push_back(std::move(d));
    if (window.size() > cfg.discrepancy_window) window.pop_front();
  };
  if (cfg.track_f1) snapshot();

  while (!trainer_high.finished()) {
    if (!trainer_low.finished()) trainer_low.run_epoch();
    trainer_high.run_epoch();
    if (every_epoch) snapshot();
    if (cfg.auto_epochs && !result.t_star_high && trainer_high.history().has_noisy) {
      const auto series = theory::noisy_loss_series(trainer_high.history());
      if (series.size() > cfg.t_star_window) {
        result.t_star_high = theory::estimate_t_star_empirical(series, cfg.t_star_window, cfg.t_star_frac);
      }
    }
    if (result.t_star_high && trainer_high.epochs_done() >= *result.t_star_high + cfg.epoch_margin) break;
  }
  if (!every_epoch) snapshot();

  result.epochs_high = trainer_high.epochs_done();
  result.epochs_low = trainer_low.epochs_done();
  result.discrepancies = window_mean(window);
  const ThresholdChoice choice = choose_threshold(cfg, result.discrepancies);
  result.tau = choice.tau;
  result.tau_fallback = choice.fallback;
  result.predicted_noisy = flags_for(result.discrepancies, result.tau);
  result.metrics = detection_metrics(result.predicted_noisy, train.noise_mask);
  const Partition part = classify_samples(result.discrepancies, result.tau);
  result.clean_count = part.clean.size();
  result.noisy_count = part.noisy.size();
  result.low_eval_accuracy = model::accuracy(low, task.eval.x, task.eval.observed);
  result.history_low = trainer_low.take_history();
  result.history_high = trainer_high.take_history();

  if (cfg.phase4) {
    if (part.clean.empty()) {
      result.phase4_skipped = true;
    } else {
      result.phase4_accuracy = retrain_accuracy(task, data::subset(train, part.clean), cfg, seed);
    }
  }
  if (cfg.baseline) result.baseline_accuracy = retrain_accuracy(task, train, cfg, seed);
  return result;
}

std::vector<ThresholdRow> threshold_sweep(std::span<const double> d, const std::vector<bool>& noise_mask,
                                          std::span<const double> taus) {
  if (taus.empty()) throw ArgumentError("threshold_sweep: empty tau list");
  if (d.size() != noise_mask.size()) throw ArgumentError("threshold_sweep: d and mask lengths differ");
  std::vector<ThresholdRow> rows;
  rows.reserve(taus.size());
  for (double tau : taus) {
    if (!(tau > 0.0)) throw ArgumentError("threshold_sweep: tau must be positive");
    rows.push_back(ThresholdRow{tau, detection_metrics(flags_for(d, tau), noise_mask)});
  }
  return rows;
}

std::vector<RankGapRecord> rank_gap_sweep(const data::TaskSpec& task,
                                          std::span<const std::pair<std::size_t, std::size_t>> pairs,
                                          const RactConfig& base, std::span<const std::uint64_t> seeds,
                                          std::size_t jobs) {
  if (pairs.empty()) throw ArgumentError("rank_gap_sweep: empty pair list");
  if (seeds.empty()) throw ArgumentError("rank_gap_sweep: empty seed list");
  return parallel_map(pairs.size() * seeds.size(), jobs, [&](std::size_t job) {
    const auto [r_low, r_high] = pairs[job / seeds.size()];
    const std::uint64_t seed = seeds[job % seeds.size()];
    RactConfig cfg = base;
    cfg.r_low = r_low;
    cfg.r_high = r_high;
    const RactResult res = ract_run(data::make_task(task, seed), cfg, seed);
    return RankGapRecord{r_low, r_high, seed,
                         res.phase4_accuracy.value_or(std::numeric_limits<double>::quiet_NaN()),
                         res.metrics.f1};
  });
}

}  // namespace loralab::ract
