// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#include "loralab/numerics/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "loralab/errors.hpp"
#include "loralab/numerics/rng.hpp"

namespace loralab::numerics {

namespace {

constexpr std::uint64_t kStartVectorSeed = 0x5eed5eedULL;

void normalize(std::vector<double>& v) {
  const double n = std::sqrt(dot(v, v));
  if (n > 0.0)
    for (double& x : v) x /= n;
}

void orthogonalize(std::vector<double>& v, const std::vector<std::vector<double>>& basis) {
  for (const auto& b : basis) {
    const double proj = dot(v, b);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= proj * b[i];
  }
}

}  // namespace

SpectralResult top_singular_values(const Matrix& m, std::size_t j, double tol,
                                   std::size_t max_iter) {
  if (m.empty()) throw DimensionError("top_singular_values: empty matrix");
  if (j == 0 || j > std::min(m.rows(), m.cols())) {
    throw ArgumentError("top_singular_values: j=" + std::to_string(j) + " exceeds min(rows, cols)");
  }
  if (!(tol > 0.0) || max_iter == 0) {
    throw ArgumentError("top_singular_values: tol and max_iter must be positive");
  }
  if (!m.all_finite()) throw NumericError("top_singular_values: non-finite input");

  Matrix gram = m.cols() <= m.rows() ? matmul(transpose(m), m) : matmul(m, transpose(m));
  const std::size_t n = gram.rows();
  double trace = 0.0;
  for (std::size_t i = 0; i < n; ++i) trace += gram(i, i);
  // Eigenvalues below this are roundoff left over from deflation.
  const double zero_floor = 1e-14 * trace;

  SpectralResult result;
  std::vector<std::vector<double>> found;
  // Residuals are measured against the top eigenvalue once it is known, since
  // deflation leaves errors on that scale.
  double top = 0.0;
  Rng rng(kStartVectorSeed);

  for (std::size_t s = 0; s < j; ++s) {
    std::vector<double> v(n);
    for (double& x : v) x = 1.0 + 0.1 * rng.gaussian();
    orthogonalize(v, found);
    normalize(v);

    double lambda = 0.0;
    bool done = false;
    for (std::size_t it = 0; it < max_iter; ++it) {
      ++result.iterations;
      std::vector<double> w = matvec(gram, v);
      lambda = dot(v, w);
      double residual = 0.0;
      for (std::size_t i = 0; i < n; ++i) residual += (w[i] - lambda * v[i]) * (w[i] - lambda * v[i]);
      residual = std::sqrt(residual);
      if (lambda <= zero_floor || residual <= tol * std::max(lambda, top)) {
        done = true;
        break;
      }
      orthogonalize(w, found);
      const double wn = std::sqrt(dot(w, w));
      if (wn == 0.0) {
        lambda = 0.0;
        done = true;
        break;
      }
      for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / wn;
    }
    if (!done) result.converged = false;
    if (lambda <= zero_floor) lambda = 0.0;
    top = std::max(top, lambda);
    result.values.push_back(std::sqrt(lambda));
    add_outer(gram, -lambda, v, v);
    found.push_back(std::move(v));
  }
  // Deflation can leave near-equal values marginally out of order.
  std::sort(result.values.begin(), result.values.end(), std::greater<>());
  return result;
}

}  // namespace loralab::numerics
