// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "loralab/errors.hpp"
#include "loralab/numerics/adamw.hpp"
#include "loralab/numerics/losses.hpp"
#include "loralab/numerics/matrix.hpp"
#include "loralab/numerics/rng.hpp"

namespace {

using loralab::numerics::Matrix;
using loralab::numerics::Rng;
namespace nx = loralab::numerics;

Matrix naive_matmul(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t p = 0; p < a.cols(); ++p) s += a(i, p) * b(p, j);
      c(i, j) = s;
    }
  }
  return c;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

TEST(Matmul, IdentityLeavesMatrixUnchanged) {
  Rng rng(3);
  const Matrix m = nx::gaussian(rng, 3, 3);
  EXPECT_EQ(nx::matmul(Matrix::identity(3), m), m);
}

TEST(Matmul, ZeroRightFactorGivesZero) {
  const Matrix a{{1, 2}, {3, 4}};
  const Matrix z{{0}, {0}};
  EXPECT_EQ(nx::matmul(a, z), Matrix(2, 1, 0.0));
}

TEST(Matmul, MatchesTripleLoop) {
  Rng rng(5);
  for (auto [n, k, m] : {std::tuple{5, 4, 3}, std::tuple{1, 9, 1}, std::tuple{17, 33, 8}}) {
    const Matrix a = nx::gaussian(rng, n, k);
    const Matrix b = nx::gaussian(rng, k, m);
    EXPECT_LT(max_abs_diff(nx::matmul(a, b), naive_matmul(a, b)), 1e-12);
  }
}

TEST(Matmul, IsAssociative) {
  Rng rng(6);
  const Matrix a = nx::gaussian(rng, 4, 6);
  const Matrix b = nx::gaussian(rng, 6, 5);
  const Matrix c = nx::gaussian(rng, 5, 3);
  const Matrix l = nx::matmul(nx::matmul(a, b), c);
  const Matrix r = nx::matmul(a, nx::matmul(b, c));
  EXPECT_LT(nx::frobenius_norm(nx::subtract(l, r)) / nx::frobenius_norm(l), 1e-10);
}

TEST(Matmul, RejectsShapeMismatch) {
  EXPECT_THROW(nx::matmul(Matrix(2, 3), Matrix(2, 3)), loralab::DimensionError);
  EXPECT_THROW(nx::matvec(Matrix(2, 3), std::vector<double>(2)), loralab::DimensionError);
}

TEST(MatrixOps, MatvecAndTransposeAgreeWithMatmul) {
  Rng rng(8);
  const Matrix m = nx::gaussian(rng, 4, 3);
  const std::vector<double> x{0.5, -1.0, 2.0};
  const auto y = nx::matvec(m, x);
  const Matrix xm(3, 1, x);
  const Matrix ym = nx::matmul(m, xm);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(y[i], ym(i, 0), 1e-14);
  const std::vector<double> u{1.0, 2.0, -1.0, 0.5};
  const auto z = nx::matvec_transposed(m, u);
  const auto zt = nx::matvec(nx::transpose(m), u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(z[i], zt[i], 1e-14);
}

TEST(MatrixOps, ArgmaxTiesGoToLowestIndex) {
  EXPECT_EQ(nx::argmax(std::vector<double>{1.0, 3.0, 3.0, 2.0}), 1u);
  EXPECT_EQ(nx::argmax(std::vector<double>{0.0, 0.0}), 0u);
}

TEST(SoftmaxCrossEntropy, UniformLogitsGiveLogC) {
  const auto r = nx::softmax_cross_entropy(std::vector<double>{0.7, 0.7, 0.7, 0.7}, 2);
  EXPECT_NEAR(r.loss, std::log(4.0), 1e-12);
}

TEST(SoftmaxCrossEntropy, SaturatedCorrectClass) {
  const auto r = nx::softmax_cross_entropy(std::vector<double>{30.0, -30.0}, 0);
  EXPECT_NEAR(r.loss, 0.0, 1e-12);
  EXPECT_NEAR(r.grad[0], 0.0, 1e-12);
  EXPECT_NEAR(r.grad[1], 0.0, 1e-12);
}

TEST(SoftmaxCrossEntropy, GradientMatchesCentralDifferences) {
  Rng rng(11);
  for (int t = 0; t < 10; ++t) {
    std::vector<double> z(5);
    for (double& v : z) v = rng.uniform(-4.0, 4.0);
    const std::size_t label = rng.index(5);
    const auto r = nx::softmax_cross_entropy(z, label);
    double sum_p = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double p = r.grad[i] + (i == label ? 1.0 : 0.0);
      EXPECT_GE(p, 0.0);
      sum_p += p;
      auto zp = z, zm = z;
      zp[i] += 1e-6;
      zm[i] -= 1e-6;
      const double fd = (nx::cross_entropy(zp, label) - nx::cross_entropy(zm, label)) / 2e-6;
      EXPECT_NEAR(r.grad[i], fd, 1e-6 * std::max(1.0, std::abs(fd)));
    }
    EXPECT_NEAR(sum_p, 1.0, 1e-12);
  }
}

TEST(SoftmaxCrossEntropy, RejectsBadInput) {
  EXPECT_THROW(nx::softmax_cross_entropy(std::vector<double>{1.0, 2.0}, 2), loralab::ArgumentError);
  EXPECT_THROW(nx::softmax_cross_entropy(std::vector<double>{1.0, NAN}, 0), loralab::NumericError);
}

TEST(SquaredLoss, HandArithmetic) {
  const auto zero = nx::squared_loss(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0, 2.0});
  EXPECT_EQ(zero.loss, 0.0);
  const auto r = nx::squared_loss(std::vector<double>{1.0, 0.0}, std::vector<double>{0.0, 0.0});
  EXPECT_DOUBLE_EQ(r.loss, 0.5);
  EXPECT_DOUBLE_EQ(r.grad[0], 1.0);
  EXPECT_DOUBLE_EQ(r.grad[1], 0.0);
}

TEST(SquaredLoss, GradientMatchesFiniteDifferences) {
  Rng rng(12);
  const Matrix p = nx::gaussian(rng, 1, 6);
  const Matrix t = nx::gaussian(rng, 1, 6);
  const auto r = nx::squared_loss(p.row(0), t.row(0));
  const Matrix fd = nx::finite_difference_gradient(
      [&](const Matrix& x) { return nx::squared_loss(x.row(0), t.row(0)).loss; }, p, 1e-5);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(r.grad[i], fd(0, i), 1e-8 * std::max(1.0, std::abs(fd(0, i))));
}

TEST(FiniteDifference, SumAndHalfNorm) {
  Rng rng(13);
  const Matrix x = nx::gaussian(rng, 3, 4);
  const Matrix ones = nx::finite_difference_gradient(
      [](const Matrix& m) {
        double s = 0.0;
        for (double v : m.values()) s += v;
        return s;
      },
      x, 1e-4);
  EXPECT_LT(max_abs_diff(ones, Matrix(3, 4, 1.0)), 1e-9);
  const Matrix g = nx::finite_difference_gradient(
      [](const Matrix& m) { return 0.5 * nx::frobenius_norm_squared(m); }, x, 1e-4);
  EXPECT_LT(max_abs_diff(g, x), 1e-8);
}

TEST(AdamW, ZeroGradientAndNoDecayLeavesParam) {
  Matrix p{{1.0, -2.0}};
  const Matrix g(1, 2, 0.0);
  nx::AdamWOptions o;
  o.weight_decay = 0.0;
  nx::AdamWState s(1, 2, o);
  nx::adamw_step(p, g, s);
  EXPECT_EQ(p, (Matrix{{1.0, -2.0}}));
}

TEST(AdamW, FirstStepMatchesHandUnrolledRecurrence) {
  Matrix p{{0.5, -1.0, 2.0}};
  const Matrix g{{0.1, -0.2, 0.05}};
  nx::AdamWOptions o;
  o.learning_rate = 0.01;
  o.weight_decay = 0.1;
  o.clip_norm = 0.0;
  nx::AdamWState s(1, 3, o);
  const Matrix before = p;
  nx::adamw_step(p, g, s);
  for (std::size_t i = 0; i < 3; ++i) {
    const double gi = g(0, i);
    const double m = (1 - 0.9) * gi;
    const double v = (1 - 0.999) * gi * gi;
    const double m_hat = m / (1 - 0.9);
    const double v_hat = v / (1 - 0.999);
    const double expect = before(0, i) * (1 - 0.01 * 0.1) - 0.01 * m_hat / (std::sqrt(v_hat) + 1e-8);
    EXPECT_NEAR(p(0, i), expect, 1e-15);
  }
  EXPECT_EQ(s.step, 1u);
}

TEST(AdamW, ClipsJointNormToBudget) {
  Matrix p1(1, 2, 0.0), p2(1, 2, 0.0);
  const Matrix g1{{6.0, 0.0}};
  const Matrix g2{{0.0, 8.0}};
  nx::AdamWOptions o;
  o.clip_norm = 1.0;
  o.weight_decay = 0.0;
  nx::AdamWState s1(1, 2, o), s2(1, 2, o);
  const std::array<nx::ParamSlot, 2> group{nx::ParamSlot{&p1, &g1, &s1}, nx::ParamSlot{&p2, &g2, &s2}};
  const double norm = nx::adamw_step(group);
  EXPECT_DOUBLE_EQ(norm, 10.0);
  // The first moment holds (1 - beta1) * clipped grad; its norm is (1 - beta1) * 1.
  const double clipped = std::hypot(s1.first_moment(0, 0), s2.first_moment(0, 1)) / (1 - 0.9);
  EXPECT_NEAR(clipped, 1.0, 1e-12);
}

TEST(AdamW, RejectsNonFiniteGradient) {
  Matrix p(1, 1, 0.0);
  const Matrix g(1, 1, INFINITY);
  nx::AdamWState s(1, 1, nx::AdamWOptions{});
  EXPECT_THROW(nx::adamw_step(p, g, s), loralab::NumericError);
}

TEST(AdamW, RepeatedRunsAreBitIdentical) {
  auto run = [] {
    Rng rng(21);
    Matrix p = nx::gaussian(rng, 3, 3);
    nx::AdamWState s(3, 3, nx::AdamWOptions{});
    for (int i = 0; i < 20; ++i) nx::adamw_step(p, nx::gaussian(rng, 3, 3), s);
    return p;
  };
  EXPECT_EQ(run(), run());
}

TEST(Rng, SameSeedSameDraws) {
  Rng a(99), b(99);
  EXPECT_EQ(nx::gaussian(a, 4, 4), nx::gaussian(b, 4, 4));
  EXPECT_EQ(nx::uniform(a, -1, 1, 2, 3), nx::uniform(b, -1, 1, 2, 3));
  std::vector<std::size_t> ia(20), ib(20);
  std::iota(ia.begin(), ia.end(), 0);
  std::iota(ib.begin(), ib.end(), 0);
  nx::shuffle(a, ia);
  nx::shuffle(b, ib);
  EXPECT_EQ(ia, ib);
}

TEST(Rng, GaussianMoments) {
  Rng rng(7);
  const Matrix g = nx::gaussian(rng, 1000, 100);
  double mean = 0.0;
  for (double v : g.values()) mean += v;
  mean /= static_cast<double>(g.size());
  double var = 0.0;
  for (double v : g.values()) var += (v - mean) * (v - mean);
  var /= static_cast<double>(g.size() - 1);
  EXPECT_NEAR(mean, 0.0, 0.02);
  EXPECT_NEAR(var, 1.0, 0.05);
}

TEST(Rng, KaimingUniformBound) {
  Rng rng(4);
  const Matrix k = nx::kaiming_uniform(rng, 6, 50, 6);
  for (double v : k.values()) {
    EXPECT_GE(v, -1.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(Rng, DerivedStreamsDiffer) {
  EXPECT_NE(nx::derive_seed(42, 1), nx::derive_seed(42, 2));
  EXPECT_NE(nx::derive_seed(42, 1), nx::derive_seed(43, 1));
  EXPECT_EQ(nx::derive_seed(42, 1), nx::derive_seed(42, 1));
}

}  // namespace
