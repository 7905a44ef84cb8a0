// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>

// Inner-loop kernels over contiguous double arrays. Every kernel has a scalar
// reference variant and, on x86-64, an AVX2/FMA variant; one table is selected
// at startup from the running CPU.
//
// Elementwise kernels (axpy, scale, adamw_update) round identically in every
// variant. Reductions (dot, sum_squares) accumulate in lanes, so variants agree
// only to a few ulps of the summed magnitude.

namespace loralab::kernels {

enum class Isa { kScalar, kAvx2 };

struct AdamWCoefficients {
  double lr;
  double beta1;
  double beta2;
  double epsilon;
  double weight_decay;
  double grad_scale;         // multiplies every gradient entry (clipping)
  double bias_correction1;   // 1 - beta1^t
  double bias_correction2;   // 1 - beta2^t
};

struct KernelTable {
  Isa isa;
  const char* name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum_squares)(const double* a, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // x *= alpha
  void (*scale)(double alpha, double* x, std::size_t n);
  void (*adamw_update)(const AdamWCoefficients& c, double* param, const double* grad,
                       double* m, double* v, std::size_t n);
};

const KernelTable& scalar_table();

// nullptr when the variant was not compiled in.
const KernelTable* avx2_table();

bool cpu_supports(Isa isa);

// The table used by the numerics layer. Chosen once from the CPU on first use.
const KernelTable& active();

// Pin the active table, e.g. to run a whole experiment on the reference path.
// Throws loralab::ArgumentError if the ISA is unavailable.
void select(Isa isa);

const char* isa_name(Isa isa);

}  // namespace loralab::kernels
