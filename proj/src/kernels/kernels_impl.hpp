// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "loralab/kernels/kernels.hpp"

namespace loralab::kernels {

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double sum_squares(const double* a, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, double* x, std::size_t n);
void adamw_update(const AdamWCoefficients& c, double* param, const double* grad, double* m,
                  double* v, std::size_t n);
}  // namespace scalar

#if defined(LORALAB_HAVE_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double sum_squares(const double* a, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, double* x, std::size_t n);
void adamw_update(const AdamWCoefficients& c, double* param, const double* grad, double* m,
                  double* v, std::size_t n);
}  // namespace avx2
#endif

}  // namespace loralab::kernels
