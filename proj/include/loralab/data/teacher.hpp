// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "loralab/data/dataset.hpp"
#include "loralab/numerics/matrix.hpp"

namespace loralab::data {

/// Synthetic ground-truth map w_star = sum_i sigma_i u_i v_iᵀ with
/// sigma_i = i^-(alpha + 1/2), so the rank-r tail energy decays like r^-2alpha.
///
/// Without a readout, class labels are argmax(w_star x) over all d outputs.
/// With a readout R (C x d), labels are argmax(R relu(w_star x)), the same
/// frozen head a LoraModel can carry.
struct Teacher {
  numerics::Matrix w_star;             // d x k
  numerics::Matrix left;               // d x r*, orthonormal columns
  numerics::Matrix right;              // k x r*, orthonormal columns
  std::vector<double> singular_values; // descending
  std::size_t intrinsic_rank = 0;
  double smooth_alpha = 0.0;
  std::optional<numerics::Matrix> readout;

  std::size_t output_dim() const noexcept { return w_star.rows(); }
  std::size_t input_dim() const noexcept { return w_star.cols(); }
  std::size_t num_classes() const noexcept;

  std::vector<double> response(std::span<const double> x) const;
  std::size_t label(std::span<const double> x) const;
};

Teacher make_teacher(std::size_t d, std::size_t k, std::size_t rank, double alpha,
                     std::uint64_t seed);

/// Frozen C x d readout with standard gaussian entries.
numerics::Matrix make_readout(std::size_t num_classes, std::size_t d, std::uint64_t seed);

/// sum_{i > r} sigma_i^2, the squared Frobenius error of the best rank-r
/// approximation of w_star.
double tail_energy(const Teacher& teacher, std::size_t r);

/// Draws n inputs x ~ N(0, I_k) and labels them with the teacher.
/// Regression datasets carry targets w_star x and leave labels empty.
NoisyDataset sample_dataset(const Teacher& teacher, std::size_t n, std::uint64_t seed,
                            Task task = Task::kClassification);

}  // namespace loralab::data
