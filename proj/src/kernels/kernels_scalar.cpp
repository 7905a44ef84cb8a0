// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "kernels_impl.hpp"

namespace loralab::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_squares(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * a[i];
  return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale(double alpha, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void adamw_update(const AdamWCoefficients& c, double* param, const double* grad, double* m,
                  double* v, std::size_t n) {
  const double decay = 1.0 - c.lr * c.weight_decay;
  for (std::size_t i = 0; i < n; ++i) {
    const double g = grad[i] * c.grad_scale;
    m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g;
    v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * (g * g);
    const double m_hat = m[i] / c.bias_correction1;
    const double v_hat = v[i] / c.bias_correction2;
    param[i] = param[i] * decay - c.lr * (m_hat / (std::sqrt(v_hat) + c.epsilon));
  }
}

}  // namespace loralab::kernels::scalar
