// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

#include "loralab/numerics/matrix.hpp"

namespace loralab::numerics {

/// Seeded random stream backed by the 64-bit Mersenne Twister (period
/// 2^19937 - 1). Draws are reproducible for a given seed within one standard
/// library implementation; no cross-platform bit equality is promised.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  double uniform(double lo, double hi);
  double gaussian();
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// Independent child seed for a named sub-stream (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

Matrix gaussian(Rng& rng, std::size_t rows, std::size_t cols);
Matrix uniform(Rng& rng, double lo, double hi, std::size_t rows, std::size_t cols);
/// Entries uniform in [-sqrt(6/fan_in), sqrt(6/fan_in)].
Matrix kaiming_uniform(Rng& rng, std::size_t fan_in, std::size_t rows, std::size_t cols);
void shuffle(Rng& rng, std::span<std::size_t> indices);

}  // namespace loralab::numerics
