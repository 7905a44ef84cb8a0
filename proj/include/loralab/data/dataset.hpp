// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "loralab/numerics/matrix.hpp"

namespace loralab::data {

enum class Task { kClassification, kRegression };

/// Inputs with observed (possibly corrupted) labels. The clean labels and the
/// noise mask are ground truth kept for evaluation; training reads only
/// `observed`.
struct NoisyDataset {
  numerics::Matrix x;                    // n x k
  std::vector<std::size_t> observed;     // labels seen by training
  std::vector<std::size_t> clean;        // true labels
  std::vector<bool> noise_mask;          // observed[i] != clean[i]
  std::size_t num_classes = 0;
  double noise_rate = 0.0;
  Task task = Task::kClassification;
  std::optional<numerics::Matrix> targets;  // n x d, regression only

  std::size_t size() const noexcept { return x.rows(); }
  std::size_t input_dim() const noexcept { return x.cols(); }
  std::size_t noisy_count() const;
};

/// Copy of the listed rows, in the listed order.
NoisyDataset subset(const NoisyDataset& ds, std::span<const std::size_t> indices);

/// Flips exactly floor(eta * n) labels, chosen uniformly without replacement,
/// each to a uniformly drawn different class.
NoisyDataset inject_symmetric_noise(const NoisyDataset& ds, double eta, std::uint64_t seed);

/// Disjoint shuffled split. The evaluation part carries clean labels only.
std::pair<NoisyDataset, NoisyDataset> train_eval_split(const NoisyDataset& ds,
                                                       double eval_fraction, std::uint64_t seed);

/// Standard gaussian inputs with labels drawn uniformly at random,
/// independent of the inputs.
NoisyDataset random_label_dataset(std::size_t n, std::size_t k, std::size_t num_classes,
                                  std::uint64_t seed);

}  // namespace loralab::data
