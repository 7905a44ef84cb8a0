// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#include "loralab/data/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "loralab/errors.hpp"
#include "loralab/numerics/rng.hpp"

namespace loralab::data {

using numerics::Matrix;
using numerics::Rng;

std::size_t NoisyDataset::noisy_count() const {
  return static_cast<std::size_t>(std::count(noise_mask.begin(), noise_mask.end(), true));
}

NoisyDataset subset(const NoisyDataset& ds, std::span<const std::size_t> indices) {
  if (indices.empty()) throw ArgumentError("subset: empty index list");
  NoisyDataset out;
  out.x = Matrix(indices.size(), ds.input_dim());
  if (ds.targets) out.targets = Matrix(indices.size(), ds.targets->cols());
  out.num_classes = ds.num_classes;
  out.task = ds.task;
  const bool labelled = !ds.observed.empty();
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const std::size_t src = indices[i];
    if (src >= ds.size()) throw ArgumentError("subset: index out of range");
    std::copy_n(ds.x.row(src).begin(), ds.input_dim(), out.x.row(i).begin());
    if (ds.targets) std::copy_n(ds.targets->row(src).begin(), ds.targets->cols(), out.targets->row(i).begin());
    if (labelled) {
      out.observed.push_back(ds.observed[src]);
      out.clean.push_back(ds.clean[src]);
    }
    out.noise_mask.push_back(ds.noise_mask.empty() ? false : ds.noise_mask[src]);
  }
  out.noise_rate = out.size() == 0 ? 0.0
                                   : static_cast<double>(out.noisy_count()) / static_cast<double>(out.size());
  return out;
}

NoisyDataset inject_symmetric_noise(const NoisyDataset& ds, double eta, std::uint64_t seed) {
  if (!(eta >= 0.0 && eta < 1.0)) throw ArgumentError("inject_symmetric_noise: eta must lie in [0, 1)");
  NoisyDataset out = ds;
  if (eta == 0.0) {
    out.observed = ds.clean;
    out.noise_mask.assign(ds.size(), false);
    out.noise_rate = 0.0;
    return out;
  }
  if (ds.task != Task::kClassification || ds.num_classes < 2) {
    throw ArgumentError("inject_symmetric_noise: needs a classification dataset with at least 2 classes");
  }
  const std::size_t n = ds.size();
  // 0.29 * 100 evaluates to 28.999...
  const auto flips = static_cast<std::size_t>(std::floor(eta * static_cast<double>(n) + 1e-9));

  Rng rng(numerics::derive_seed(seed, 0x6e6f697365ULL));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  numerics::shuffle(rng, order);

  // Start from the clean labels so repeated injection does not compound.
  out.observed = ds.clean;
  out.noise_mask.assign(n, false);
  for (std::size_t i = 0; i < flips; ++i) {
    const std::size_t idx = order[i];
    const std::size_t original = ds.clean[idx];
    const std::size_t draw = rng.index(ds.num_classes - 1);
    out.observed[idx] = draw < original ? draw : draw + 1;
    out.noise_mask[idx] = true;
  }
  out.noise_rate = eta;
  return out;
}

std::pair<NoisyDataset, NoisyDataset> train_eval_split(const NoisyDataset& ds, double eval_fraction,
                                                       std::uint64_t seed) {
  if (!(eval_fraction > 0.0 && eval_fraction < 1.0)) {
    throw ArgumentError("train_eval_split: eval_fraction must lie in (0, 1)");
  }
  const std::size_t n = ds.size();
  const auto n_eval = static_cast<std::size_t>(std::llround(eval_fraction * static_cast<double>(n)));
  if (n_eval == 0 || n_eval >= n) {
    throw ArgumentError("train_eval_split: fraction " + std::to_string(eval_fraction) + " of " +
                        std::to_string(n) + " samples leaves an empty side");
  }
  Rng rng(numerics::derive_seed(seed, 0x73706c6974ULL));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  numerics::shuffle(rng, order);

  const std::span<const std::size_t> all(order);
  NoisyDataset eval = subset(ds, all.first(n_eval));
  NoisyDataset train = subset(ds, all.subspan(n_eval));
  eval.observed = eval.clean;
  eval.noise_mask.assign(eval.size(), false);
  eval.noise_rate = 0.0;
  return {std::move(train), std::move(eval)};
}

NoisyDataset random_label_dataset(std::size_t n, std::size_t k, std::size_t num_classes,
                                  std::uint64_t seed) {
  if (n == 0 || k == 0) throw ArgumentError("random_label_dataset: n and k must be positive");
  if (num_classes < 2) throw ArgumentError("random_label_dataset: need at least 2 classes");
  Rng rng(numerics::derive_seed(seed, 0x72616e646f6dULL));
  NoisyDataset ds;
  ds.x = numerics::gaussian(rng, n, k);
  ds.observed.resize(n);
  for (auto& y : ds.observed) y = rng.index(num_classes);
  ds.clean = ds.observed;
  ds.noise_mask.assign(n, false);
  ds.num_classes = num_classes;
  return ds;
}

}  // namespace loralab::data
