// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "loralab/data/dataset.hpp"
#include "loralab/errors.hpp"
#include "loralab/model/lora_model.hpp"
#include "loralab/numerics/rng.hpp"
#include "loralab/numerics/spectral.hpp"
#include "loralab/theory/analyzers.hpp"

namespace {

using loralab::numerics::Matrix;
namespace nx = loralab::numerics;

// One-sided Jacobi: rotate column pairs until all are orthogonal; the column
// norms are then the singular values.
std::vector<double> jacobi_singular_values(Matrix a) {
  if (a.rows() < a.cols()) a = nx::transpose(a);
  const std::size_t n = a.cols();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) {
          alpha += a(i, p) * a(i, p);
          beta += a(i, q) * a(i, q);
          gamma += a(i, p) * a(i, q);
        }
        if (std::abs(gamma) < 1e-300) continue;
        off = std::max(off, std::abs(gamma) / std::sqrt(alpha * beta));
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < a.rows(); ++i) {
          const double ap = a(i, p), aq = a(i, q);
          a(i, p) = c * ap - s * aq;
          a(i, q) = s * ap + c * aq;
        }
      }
    }
    if (off < 1e-15) break;
  }
  std::vector<double> sv(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, j) * a(i, j);
    sv[j] = std::sqrt(s);
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

TEST(TopSingularValues, DiagonalCase) {
  const Matrix d{{3, 0, 0}, {0, 2, 0}, {0, 0, 1}};
  const auto r = nx::top_singular_values(d, 2);
  ASSERT_EQ(r.values.size(), 2u);
  EXPECT_NEAR(r.values[0], 3.0, 1e-9);
  EXPECT_NEAR(r.values[1], 2.0, 1e-9);
  EXPECT_TRUE(r.converged);
}

TEST(TopSingularValues, Identity) {
  const auto r = nx::top_singular_values(Matrix::identity(4), 1);
  EXPECT_NEAR(r.values[0], 1.0, 1e-12);
}

TEST(TopSingularValues, MatchesJacobiOracle) {
  nx::Rng rng(31);
  for (auto [m, n] : {std::pair{6, 5}, std::pair{3, 8}, std::pair{8, 8}, std::pair{2, 2}, std::pair{7, 1}}) {
    const Matrix a = nx::gaussian(rng, m, n);
    const auto oracle = jacobi_singular_values(a);
    const std::size_t j = std::min<std::size_t>(m, n);
    const auto r = nx::top_singular_values(a, j);
    ASSERT_EQ(r.values.size(), j);
    for (std::size_t i = 0; i < j; ++i) EXPECT_NEAR(r.values[i], oracle[i], 1e-8) << m << "x" << n << " i=" << i;
  }
}

TEST(TopSingularValues, RejectsBadArguments) {
  EXPECT_THROW(nx::top_singular_values(Matrix(2, 3), 3), loralab::ArgumentError);
  EXPECT_THROW(nx::top_singular_values(Matrix(2, 2, NAN), 1), loralab::NumericError);
}

TEST(TopSingularValues, ReportsNonConvergence) {
  nx::Rng rng(32);
  const auto r = nx::top_singular_values(nx::gaussian(rng, 8, 8), 4, 1e-300, 1);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.values.size(), 4u);
}

TEST(GradientCovariance, MatchesJacobiOracleOnTinyCase) {
  nx::Rng rng(33);
  const Matrix w0 = nx::gaussian(rng, 3, 3);
  loralab::model::LoraModel m = loralab::model::LoraModel::init(w0, 1, 5);
  m.b() = nx::gaussian(rng, 3, 1);
  loralab::data::NoisyDataset ds;
  ds.x = nx::gaussian(rng, 5, 3);
  ds.observed = {0, 1, 2, 0, 1};
  ds.clean = ds.observed;
  ds.noise_mask.assign(5, false);
  ds.num_classes = 3;
  const auto spec = loralab::theory::gradient_covariance_sigma_r(m, ds, 3);
  Matrix g = loralab::theory::per_sample_gradients(m, ds);
  g = nx::scaled(g, 1.0 / std::sqrt(5.0));
  const auto sv = jacobi_singular_values(g);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(spec.values[i], sv[i] * sv[i], 1e-8);
  EXPECT_NEAR(spec.sigma_r, sv[2] * sv[2], 1e-8);
}

TEST(GradientCovariance, IdenticalGradientsAreRankOne) {
  const Matrix w0{{1.0, 0.0}, {0.0, 1.0}};
  loralab::model::LoraModel m = loralab::model::LoraModel::init(w0, 1, 3);
  loralab::data::NoisyDataset ds;
  ds.x = Matrix{{1.0, 2.0}, {1.0, 2.0}, {1.0, 2.0}};
  ds.observed = {1, 1, 1};
  ds.clean = ds.observed;
  ds.noise_mask.assign(3, false);
  ds.num_classes = 2;
  const Matrix g = loralab::theory::per_sample_gradients(m, ds);
  const auto spec = loralab::theory::gradient_covariance_sigma_r(m, ds, 2);
  EXPECT_NEAR(spec.values[0], nx::dot(g.row(0), g.row(0)), 1e-10);
  EXPECT_NEAR(spec.values[1], 0.0, 1e-8);
}

}  // namespace
