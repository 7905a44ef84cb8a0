// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "loralab/data/dataset.hpp"
#include "loralab/errors.hpp"
#include "loralab/model/lora_model.hpp"
#include "loralab/model/trainer.hpp"
#include "loralab/numerics/losses.hpp"
#include "loralab/numerics/rng.hpp"

namespace {

namespace nx = loralab::numerics;
namespace lm = loralab::model;
using nx::Matrix;

std::vector<double> row_vec(const Matrix& m, std::size_t i) {
  return {m.row(i).begin(), m.row(i).end()};
}

TEST(LoraModel, InitLeavesBackboneUnchanged) {
  nx::Rng rng(1);
  const Matrix w0 = nx::gaussian(rng, 5, 7);
  const auto m = lm::LoraModel::init(w0, 3, 9);
  EXPECT_EQ(m.b(), Matrix(5, 3));
  EXPECT_EQ(m.delta(), Matrix(5, 7));
  const Matrix x = nx::gaussian(rng, 10, 7);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    EXPECT_EQ(m.forward(x.row(i)), nx::matvec(w0, x.row(i)));
  }
}

TEST(LoraModel, InitDrawsKaimingA) {
  const auto m1 = lm::LoraModel::init(Matrix(4, 6), 2, 77);
  const auto m2 = lm::LoraModel::init(Matrix(4, 6), 2, 77);
  const auto m3 = lm::LoraModel::init(Matrix(4, 6), 2, 78);
  EXPECT_EQ(m1.a(), m2.a());
  EXPECT_NE(m1.a(), m3.a());
  const double bound = std::sqrt(6.0 / 6.0);
  for (double v : m1.a().values()) EXPECT_LE(std::abs(v), bound);
}

TEST(LoraModel, RankBounds) {
  EXPECT_THROW(lm::LoraModel::init(Matrix(4, 6), 0, 1), loralab::ArgumentError);
  EXPECT_THROW(lm::LoraModel::init(Matrix(4, 6), 5, 1), loralab::ArgumentError);
  EXPECT_NO_THROW(lm::LoraModel::init(Matrix(4, 6), 4, 1));
}

TEST(LoraModel, ScalingIsAlphaOverRank) {
  lm::LoraOptions o;
  o.lora_alpha = 8.0;
  const auto m = lm::LoraModel::init(Matrix(4, 4), 2, 1, o);
  EXPECT_DOUBLE_EQ(m.scaling(), 4.0);
}

TEST(LoraModel, DeltaMatchesDenseProduct) {
  nx::Rng rng(2);
  auto m = lm::LoraModel::init(nx::gaussian(rng, 4, 5), 2, 3);
  m.b() = nx::gaussian(rng, 4, 2);
  const Matrix expect = nx::scaled(nx::matmul(m.b(), m.a()), 16.0 / 2.0);
  const Matrix got = m.delta();
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(got(i, j), expect(i, j), 1e-12);
  const Matrix x = nx::gaussian(rng, 6, 5);
  const Matrix w = nx::add(m.w0(), expect);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto y = m.forward(x.row(r));
    const auto z = nx::matvec(w, x.row(r));
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(y[i], z[i], 1e-12);
  }
}

TEST(LoraModel, IdentityDelta) {
  lm::LoraOptions o;
  o.lora_alpha = 1.0;
  auto m = lm::LoraModel::init(Matrix(2, 2), 1, 1, o);
  m.b() = Matrix{{1.0}, {0.0}};
  m.a() = Matrix{{1.0, 0.0}};
  const std::vector<double> x{3.0, 5.0};
  EXPECT_EQ(m.forward(x), (std::vector<double>{3.0, 0.0}));
}

TEST(LoraModel, ReadoutLogitsApplyRelu) {
  lm::LoraOptions o;
  o.readout = Matrix{{1.0, 1.0}, {1.0, -1.0}};
  const auto m = lm::LoraModel::init(Matrix{{1.0, 0.0}, {0.0, 1.0}}, 1, 1, o);
  EXPECT_EQ(m.num_classes(), 2u);
  EXPECT_EQ(m.logits(std::vector<double>{2.0, -3.0}), (std::vector<double>{2.0, 2.0}));
  EXPECT_EQ(lm::predict(m, std::vector<double>{2.0, -3.0}), 0u);
}

TEST(LoraModel, BackwardZeroCases) {
  nx::Rng rng(4);
  auto m = lm::LoraModel::init(nx::gaussian(rng, 3, 4), 2, 5);
  m.b() = nx::gaussian(rng, 3, 2);
  const std::vector<double> x{1.0, -2.0, 0.5, 0.3};
  const auto g0 = m.backward(x, std::vector<double>(3, 0.0));
  EXPECT_EQ(g0.b, Matrix(3, 2));
  EXPECT_EQ(g0.a, Matrix(2, 4));
  const auto gx = m.backward(std::vector<double>(4, 0.0), std::vector<double>{1.0, 2.0, 3.0});
  EXPECT_EQ(gx.b, Matrix(3, 2));
  EXPECT_EQ(gx.a, Matrix(2, 4));
}

TEST(LoraModel, BackwardMatchesFiniteDifferences) {
  nx::Rng rng(6);
  auto m = lm::LoraModel::init(nx::gaussian(rng, 6, 5), 2, 7);
  m.b() = nx::scaled(nx::gaussian(rng, 6, 2), 0.1);
  const std::vector<double> x = row_vec(nx::gaussian(rng, 1, 5), 0);
  const std::size_t label = 3;
  const auto pass = m.forward_pass(x);
  const auto sl = lm::classification_loss(m, pass, label);
  auto grads = m.zero_grads();
  m.accumulate_backward(x, pass, sl.output_grad, 1.0, grads);

  const double h = 1e-6;
  auto loss_at = [&](lm::LoraModel& mm) { return lm::sample_cross_entropy(mm, x, label); };
  for (int which = 0; which < 2; ++which) {
    Matrix& p = which == 0 ? m.b() : m.a();
    const Matrix& g = which == 0 ? grads.b : grads.a;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double keep = p.values()[i];
      p.values()[i] = keep + h;
      const double up = loss_at(m);
      p.values()[i] = keep - h;
      const double down = loss_at(m);
      p.values()[i] = keep;
      EXPECT_NEAR(g.values()[i], (up - down) / (2 * h), 1e-6) << "param " << which << " entry " << i;
    }
  }
}

TEST(LoraModel, AccuracyHandlesTies) {
  const auto m = lm::LoraModel::init(Matrix(3, 2), 1, 1);
  const Matrix x{{1.0, 2.0}, {3.0, 4.0}};
  const std::vector<std::size_t> labels{0, 1};
  EXPECT_DOUBLE_EQ(lm::accuracy(m, x, labels), 0.5);
}

TEST(LoraModel, BaseOutputsMatchMatvec) {
  nx::Rng rng(8);
  const Matrix w0 = nx::gaussian(rng, 3, 4);
  const Matrix x = nx::gaussian(rng, 5, 4);
  const Matrix b = lm::base_outputs(w0, x);
  for (std::size_t i = 0; i < 5; ++i) {
    const auto y = nx::matvec(w0, x.row(i));
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(b(i, j), y[j], 1e-12);
  }
}

loralab::data::NoisyDataset separable_toy() {
  nx::Rng rng(9);
  loralab::data::NoisyDataset ds;
  ds.x = Matrix(60, 2);
  ds.num_classes = 2;
  for (std::size_t i = 0; i < 60; ++i) {
    const std::size_t c = i % 2;
    ds.x(i, 0) = (c == 0 ? 2.0 : -2.0) + 0.3 * rng.gaussian();
    ds.x(i, 1) = 0.3 * rng.gaussian();
    ds.observed.push_back(c);
  }
  ds.clean = ds.observed;
  ds.noise_mask.assign(60, false);
  return ds;
}

TEST(Trainer, LearnsSeparableToy) {
  const auto ds = separable_toy();
  auto m = lm::LoraModel::init(Matrix(2, 2), 1, 3);
  lm::TrainConfig cfg;
  cfg.epochs = 40;
  cfg.batch_size = 8;
  cfg.learning_rate = 0.05;
  const auto h = lm::train(m, ds, cfg);
  EXPECT_EQ(h.epoch_count(), 40u);
  EXPECT_DOUBLE_EQ(lm::accuracy(m, ds.x, ds.observed), 1.0);
  EXPECT_LT(h.epochs.back().mean_loss, h.initial.mean_loss);
  EXPECT_TRUE(std::isnan(h.epochs.back().noisy_loss));
}

TEST(Trainer, IsDeterministicForASeed) {
  const auto ds = separable_toy();
  lm::TrainConfig cfg;
  cfg.epochs = 5;
  cfg.batch_size = 7;
  auto m1 = lm::LoraModel::init(Matrix(2, 2), 1, 3);
  auto m2 = lm::LoraModel::init(Matrix(2, 2), 1, 3);
  lm::train(m1, ds, cfg);
  lm::train(m2, ds, cfg);
  EXPECT_EQ(m1.a(), m2.a());
  EXPECT_EQ(m1.b(), m2.b());
}

TEST(Trainer, EarlyStopAndShapeChecks) {
  const auto ds = separable_toy();
  lm::TrainConfig cfg;
  cfg.epochs = 10;
  cfg.early_stop_epoch = 3;
  auto m = lm::LoraModel::init(Matrix(2, 2), 1, 3);
  EXPECT_EQ(lm::train(m, ds, cfg).epoch_count(), 3u);
  auto wrong = lm::LoraModel::init(Matrix(2, 3), 1, 3);
  EXPECT_THROW(lm::train(wrong, ds, cfg), loralab::DimensionError);
}

}  // namespace
