// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#include "loralab/data/teacher.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "loralab/errors.hpp"
#include "loralab/model/activation.hpp"
#include "loralab/numerics/rng.hpp"

namespace loralab::data {

using numerics::Matrix;
using numerics::Rng;

namespace {

// Modified Gram-Schmidt over the columns of a gaussian draw.
Matrix orthonormal_columns(Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix q = numerics::gaussian(rng, rows, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t p = 0; p < j; ++p) {
      double proj = 0.0;
      for (std::size_t i = 0; i < rows; ++i) proj += q(i, p) * q(i, j);
      for (std::size_t i = 0; i < rows; ++i) q(i, j) -= proj * q(i, p);
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < rows; ++i) norm += q(i, j) * q(i, j);
    norm = std::sqrt(norm);
    if (norm < 1e-12) throw NumericError("make_teacher: degenerate gaussian draw");
    for (std::size_t i = 0; i < rows; ++i) q(i, j) /= norm;
  }
  return q;
}

}  // namespace

std::size_t Teacher::num_classes() const noexcept {
  return readout ? readout->rows() : w_star.rows();
}

std::vector<double> Teacher::response(std::span<const double> x) const {
  return numerics::matvec(w_star, x);
}

std::size_t Teacher::label(std::span<const double> x) const {
  std::vector<double> h = response(x);
  if (!readout) return numerics::argmax(h);
  for (double& v : h) v = model::head_activation(v);
  return numerics::argmax(numerics::matvec(*readout, h));
}

Teacher make_teacher(std::size_t d, std::size_t k, std::size_t rank, double alpha,
                     std::uint64_t seed) {
  if (d == 0 || k == 0) throw ArgumentError("make_teacher: d and k must be positive");
  if (rank == 0 || rank > std::min(d, k)) {
    throw ArgumentError("make_teacher: rank " + std::to_string(rank) + " outside [1, min(d, k)]");
  }
  if (!(alpha > 0.0)) throw ArgumentError("make_teacher: alpha must be positive");

  Rng rng(numerics::derive_seed(seed, 0x746561636865ULL));
  Teacher t;
  t.intrinsic_rank = rank;
  t.smooth_alpha = alpha;
  t.left = orthonormal_columns(rng, d, rank);
  t.right = orthonormal_columns(rng, k, rank);
  t.singular_values.resize(rank);
  for (std::size_t i = 0; i < rank; ++i) {
    t.singular_values[i] = std::pow(static_cast<double>(i + 1), -(alpha + 0.5));
  }
  t.w_star = Matrix(d, k);
  for (std::size_t s = 0; s < rank; ++s) {
    for (std::size_t i = 0; i < d; ++i) {
      const double u = t.singular_values[s] * t.left(i, s);
      for (std::size_t j = 0; j < k; ++j) t.w_star(i, j) += u * t.right(j, s);
    }
  }
  return t;
}

Matrix make_readout(std::size_t num_classes, std::size_t d, std::uint64_t seed) {
  if (num_classes < 2) throw ArgumentError("make_readout: need at least 2 classes");
  Rng rng(numerics::derive_seed(seed, 0x726561646f7574ULL));
  Matrix r = numerics::gaussian(rng, num_classes, d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (double& v : r.values()) v *= scale;
  return r;
}

double tail_energy(const Teacher& teacher, std::size_t r) {
  double sum = 0.0;
  for (std::size_t i = r; i < teacher.singular_values.size(); ++i) {
    sum += teacher.singular_values[i] * teacher.singular_values[i];
  }
  return sum;
}

NoisyDataset sample_dataset(const Teacher& teacher, std::size_t n, std::uint64_t seed, Task task) {
  if (n == 0) throw ArgumentError("sample_dataset: n must be positive");
  const std::size_t k = teacher.input_dim();
  Rng rng(numerics::derive_seed(seed, 0x73616d706c65ULL));
  NoisyDataset ds;
  ds.task = task;
  ds.x = numerics::gaussian(rng, n, k);
  ds.noise_mask.assign(n, false);
  if (task == Task::kClassification) {
    ds.num_classes = teacher.num_classes();
    ds.clean.resize(n);
    for (std::size_t i = 0; i < n; ++i) ds.clean[i] = teacher.label(ds.x.row(i));
    ds.observed = ds.clean;
  } else {
    ds.num_classes = teacher.output_dim();
    ds.targets = Matrix(n, teacher.output_dim());
    for (std::size_t i = 0; i < n; ++i) {
      const auto y = teacher.response(ds.x.row(i));
      std::copy(y.begin(), y.end(), ds.targets->row(i).begin());
    }
  }
  return ds;
}

}  // namespace loralab::data
