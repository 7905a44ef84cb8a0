// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#include "loralab/numerics/rng.hpp"

#include <algorithm>
#include <cmath>

#include "loralab/errors.hpp"

namespace loralab::numerics {

double Rng::uniform(double lo, double hi) {
  if (!(lo < hi)) throw ArgumentError("uniform: requires lo < hi");
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

double Rng::gaussian() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

std::size_t Rng::index(std::size_t n) {
  if (n == 0) throw ArgumentError("index: empty range");
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Matrix gaussian(Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (double& v : m.values()) v = dist(rng.engine());
  return m;
}

Matrix uniform(Rng& rng, double lo, double hi, std::size_t rows, std::size_t cols) {
  if (!(lo < hi)) throw ArgumentError("uniform: requires lo < hi");
  Matrix m(rows, cols);
  std::uniform_real_distribution<double> dist(lo, hi);
  for (double& v : m.values()) v = dist(rng.engine());
  return m;
}

Matrix kaiming_uniform(Rng& rng, std::size_t fan_in, std::size_t rows, std::size_t cols) {
  if (fan_in == 0) throw ArgumentError("kaiming_uniform: fan_in must be positive");
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
  return uniform(rng, -bound, bound, rows, cols);
}

void shuffle(Rng& rng, std::span<std::size_t> indices) {
  std::shuffle(indices.begin(), indices.end(), rng.engine());
}

}  // namespace loralab::numerics
