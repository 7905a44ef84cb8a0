// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#include "loralab/data/task.hpp"

#include "loralab/data/mnist.hpp"
#include "loralab/errors.hpp"
#include "loralab/numerics/rng.hpp"

namespace loralab::data {

namespace {

TaskData make_synthetic(const TaskSpec& spec, std::uint64_t seed) {
  const std::uint64_t teacher_seed = spec.teacher_seed.value_or(seed);
  TaskData out;
  out.w0 = numerics::Matrix(spec.d, spec.k, 0.0);
  if (spec.readout) out.readout = make_readout(spec.num_classes, spec.d, teacher_seed);

  if (spec.label_mode == LabelMode::kRandom) {
    out.train = random_label_dataset(spec.n_train, spec.k, spec.num_classes,
                                     numerics::derive_seed(seed, 1));
    out.eval = random_label_dataset(std::max<std::size_t>(spec.n_eval, 1), spec.k,
                                    spec.num_classes, numerics::derive_seed(seed, 2));
  } else {
    Teacher teacher = make_teacher(spec.d, spec.k, spec.teacher_rank, spec.smooth_alpha, teacher_seed);
    teacher.readout = out.readout;
    if (!spec.readout && spec.num_classes != spec.d) {
      throw ArgumentError("make_task: without a readout the class count must equal d");
    }
    out.train = sample_dataset(teacher, spec.n_train, numerics::derive_seed(seed, 1));
    out.eval = sample_dataset(teacher, std::max<std::size_t>(spec.n_eval, 1),
                              numerics::derive_seed(seed, 2));
    out.teacher = std::move(teacher);
  }
  out.train = inject_symmetric_noise(out.train, spec.noise_rate, numerics::derive_seed(seed, 3));
  return out;
}

TaskData make_mnist(const TaskSpec& spec, std::uint64_t seed) {
  NoisyDataset all = load_mnist_idx(spec.mnist_images, spec.mnist_labels, spec.mnist_limit);
  auto [train, eval] = train_eval_split(all, spec.eval_fraction, numerics::derive_seed(seed, 4));
  TaskData out;
  out.train = inject_symmetric_noise(train, spec.noise_rate, numerics::derive_seed(seed, 3));
  out.eval = std::move(eval);
  out.w0 = numerics::Matrix(spec.hidden, all.input_dim(), 0.0);
  out.readout = make_readout(all.num_classes, spec.hidden, seed);
  return out;
}

}  // namespace

TaskData make_task(const TaskSpec& spec, std::uint64_t seed) {
  if (!(spec.noise_rate >= 0.0 && spec.noise_rate < 1.0)) {
    throw ArgumentError("make_task: noise_rate must lie in [0, 1)");
  }
  return spec.source == Source::kMnist ? make_mnist(spec, seed) : make_synthetic(spec, seed);
}

}  // namespace loralab::data
