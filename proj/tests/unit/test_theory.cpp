// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "loralab/data/teacher.hpp"
#include "loralab/errors.hpp"
#include "loralab/theory/analyzers.hpp"
#include "loralab/theory/formulas.hpp"
#include "loralab/theory/sweeps.hpp"

namespace {

namespace th = loralab::theory;

TEST(Capacity, HandValues) {
  EXPECT_EQ(th::capacity(16, 200, 200), 6144u);
  EXPECT_EQ(th::capacity(8, 384, 384), 6080u);
  EXPECT_EQ(th::capacity(0, 10, 20), 0u);
  EXPECT_EQ(th::capacity(10, 10, 20), 200u);
}

TEST(ErrorDecomposition, HandValues) {
  const auto e = th::error_decomposition(2.0, 100.0, 10.0, 0.5, 1.0);
  EXPECT_DOUBLE_EQ(e.bias, 0.25);
  EXPECT_DOUBLE_EQ(e.variance, 0.2);
  EXPECT_DOUBLE_EQ(e.noise, 0.1);
  EXPECT_DOUBLE_EQ(e.total, 0.55);
}

TEST(OptimalRank, ExactIsAStationaryMinimum) {
  const th::TheoryConstants c{2.0, 0.5, 1.5, 1.0};
  for (double eta : {0.0, 0.2, 0.6}) {
    const double r = th::optimal_rank_exact(5000, 32, eta, 1.0, c);
    const double h = 1e-4 * r;
    const double f0 = th::error_decomposition(r, 5000, 32, eta, 1.0, c).total;
    const double fp = th::error_decomposition(r + h, 5000, 32, eta, 1.0, c).total;
    const double fm = th::error_decomposition(r - h, 5000, 32, eta, 1.0, c).total;
    EXPECT_NEAR((fp - fm) / (2 * h), 0.0, 1e-6);
    EXPECT_GT(fp, f0);
    EXPECT_GT(fm, f0);
  }
}

TEST(OptimalRank, GridAgreesWithDenseScan) {
  std::vector<std::size_t> ranks;
  for (std::size_t r = 1; r <= 64; ++r) ranks.push_back(r);
  for (double eta : {0.0, 0.3}) {
    std::size_t best = 0;
    double best_v = INFINITY;
    for (std::size_t r : ranks) {
      const double v = th::error_decomposition(static_cast<double>(r), 20000, 32, eta, 0.5).total;
      if (v < best_v) best_v = v, best = r;
    }
    EXPECT_EQ(th::optimal_rank_on_grid(ranks, 20000, 32, eta, 0.5), best);
  }
}

TEST(OptimalRank, ScalingLaw) {
  EXPECT_NEAR(th::optimal_rank_scaling(1000, 10, 0.0, 1.0), std::pow(100.0, 1.0 / 3.0), 1e-12);
  EXPECT_LT(th::optimal_rank_scaling(1000, 10, 0.5, 1.0), th::optimal_rank_scaling(1000, 10, 0.0, 1.0));
  EXPECT_NEAR(th::optimal_rank_scaling(1000, 10, 1.0, 1.0), std::pow(50.0, 1.0 / 3.0), 1e-12);
  EXPECT_THROW(th::optimal_rank_scaling(1000, 10, 1.5, 1.0), loralab::ArgumentError);
}

TEST(NoiseThreshold, HandValues) {
  EXPECT_NEAR(*th::noise_threshold_t_star(0.1, 2.0, std::exp(-1.0)), 5.0, 1e-12);
  EXPECT_NEAR(*th::noise_threshold_t_star(1.0, 1.0, 0.1), std::log(10.0), 1e-12);
  EXPECT_FALSE(th::noise_threshold_t_star(1.0, 1.0, 0.0).has_value());
  EXPECT_GT(*th::noise_threshold_t_star(1.0, 1.0, 0.1), *th::noise_threshold_t_star(1.0, 1.0, 0.4));
}

TEST(FitAlpha, RecoversExactPowerLaw) {
  const std::vector<double> r{1, 2, 4, 8, 16};
  std::vector<double> b;
  for (double x : r) b.push_back(3.0 * std::pow(x, -2 * 0.8));
  EXPECT_NEAR(th::fit_alpha(r, b), 0.8, 1e-12);
  const std::vector<double> two{1, 2};
  EXPECT_THROW(th::fit_alpha(two, two), loralab::ArgumentError);
}

TEST(FitAlpha, TeacherTailIsCloseToItsSmoothness) {
  const auto t = loralab::data::make_teacher(32, 32, 32, 1.0, 3);
  EXPECT_NEAR(th::fit_alpha(t), 1.0, 0.2);
}

TEST(EmpiricalTStar, ConstructedSeries) {
  std::vector<double> loss;
  for (int t = 0; t <= 10; ++t) loss.push_back(1.0);
  for (int t = 11; t <= 30; ++t) loss.push_back(1.0 - 0.02 * (t - 10));
  EXPECT_EQ(th::estimate_t_star_empirical(loss, 3, 0.05), 10u);
  const std::vector<double> flat(20, 1.0);
  EXPECT_FALSE(th::estimate_t_star_empirical(flat, 3, 0.05).has_value());
  EXPECT_THROW(th::estimate_t_star_empirical(std::vector<double>(3, 1.0), 3, 0.05), loralab::ArgumentError);
}

TEST(HalfLife, ConstructedSeries) {
  EXPECT_EQ(th::half_life_epoch(std::vector<double>{2.0, 1.5, 1.1, 0.9, 0.5}), 3u);
  EXPECT_FALSE(th::half_life_epoch(std::vector<double>{2.0, 1.5, 1.1}).has_value());
}

TEST(Aggregate, MeanStdCount) {
  const auto a = th::aggregate(std::vector<double>{1.0, 2.0, 3.0});
  EXPECT_DOUBLE_EQ(a.mean, 2.0);
  ASSERT_TRUE(a.std.has_value());
  EXPECT_DOUBLE_EQ(*a.std, 1.0);
  EXPECT_EQ(a.count, 3u);
  EXPECT_FALSE(th::aggregate(std::vector<double>{5.0}).std.has_value());
  EXPECT_DOUBLE_EQ(th::median(std::vector<double>{3.0, 1.0, 2.0}), 2.0);
  EXPECT_DOUBLE_EQ(th::median(std::vector<double>{4.0, 1.0, 2.0, 3.0}), 2.5);
}

th::SweepConfig tiny_sweep() {
  th::SweepConfig cfg;
  cfg.task.d = 8;
  cfg.task.k = 8;
  cfg.task.n_train = 60;
  cfg.task.n_eval = 40;
  cfg.ranks = {1, 4};
  cfg.noise_rates = {0.0, 0.4};
  cfg.seeds = {1, 2};
  cfg.train.epochs = 3;
  cfg.train.batch_size = 16;
  return cfg;
}

TEST(Sweeps, RankTradeoffGridShapeAndDeterminism) {
  const auto cfg = tiny_sweep();
  const auto a = th::rank_tradeoff_sweep(cfg);
  const auto b = th::rank_tradeoff_sweep(cfg);
  ASSERT_EQ(a.records.size(), 8u);
  EXPECT_EQ(a.points.size(), 4u);
  EXPECT_EQ(a.argmins.size(), 4u);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].eval_acc, b.records[i].eval_acc);
    EXPECT_NEAR(a.records[i].eval_err, 1.0 - a.records[i].eval_acc, 1e-15);
  }
  EXPECT_EQ(a.records[0].rank, 1u);
  EXPECT_EQ(a.records[2].noise_rate, 0.4);
  EXPECT_EQ(a.records[1].seed, 2u);
}

TEST(Sweeps, MemorizationUsesRandomLabels) {
  auto cfg = tiny_sweep();
  cfg.task.label_mode = loralab::data::LabelMode::kRandom;
  cfg.noise_rates = {0.0};
  const auto r = th::memorization_sweep(cfg);
  ASSERT_EQ(r.records.size(), 4u);
  for (const auto& rec : r.records) {
    EXPECT_GE(rec.final_train_acc, 0.0);
    EXPECT_LE(rec.final_train_acc, 1.0);
  }
}

TEST(Sweeps, TemporalRecordsEveryEpoch) {
  th::TemporalConfig cfg;
  cfg.task.d = 8;
  cfg.task.k = 8;
  cfg.task.n_train = 80;
  cfg.task.n_eval = 20;
  cfg.task.noise_rate = 0.25;
  cfg.rank = 4;
  cfg.reference_rank = 1;
  cfg.ract.phase1.epochs = 4;
  cfg.ract.phase1.batch_size = 16;
  cfg.seeds = {7};
  const auto r = th::temporal_run(cfg);
  EXPECT_EQ(r.records.size(), 5u);
  ASSERT_EQ(r.summaries.size(), 1u);
  for (const auto& rec : r.records) {
    EXPECT_TRUE(std::isfinite(rec.clean_loss));
    EXPECT_TRUE(std::isfinite(rec.noisy_loss));
  }
}

}  // namespace
