// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>

#include "loralab/data/dataset.hpp"
#include "loralab/data/teacher.hpp"
#include "loralab/numerics/matrix.hpp"

namespace loralab::data {

enum class LabelMode { kTeacher, kRandom };
enum class Source { kSynthetic, kMnist };

/// Everything needed to build the data side of one experiment cell.
struct TaskSpec {
  Source source = Source::kSynthetic;
  // synthetic
  std::size_t d = 32;
  std::size_t k = 32;
  std::size_t num_classes = 4;
  std::size_t teacher_rank = 4;
  double smooth_alpha = 1.0;
  LabelMode label_mode = LabelMode::kTeacher;
  bool readout = true;
  std::size_t n_train = 2000;
  std::size_t n_eval = 1000;
  std::optional<std::uint64_t> teacher_seed;  // fixed teacher across run seeds if set
  // mnist
  std::filesystem::path mnist_images;
  std::filesystem::path mnist_labels;
  std::size_t mnist_limit = 10000;
  std::size_t hidden = 64;  // adapted layer width for mnist
  double eval_fraction = 0.2;
  // both
  double noise_rate = 0.0;
};

/// Train/eval data plus the frozen parts of the student (w0 and readout).
/// The eval set always carries clean labels.
struct TaskData {
  NoisyDataset train;
  NoisyDataset eval;
  std::optional<Teacher> teacher;
  numerics::Matrix w0;
  std::optional<numerics::Matrix> readout;
};

TaskData make_task(const TaskSpec& spec, std::uint64_t seed);

}  // namespace loralab::data
