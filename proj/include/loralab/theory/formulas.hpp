// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "loralab/data/teacher.hpp"

namespace loralab::theory {

/// Hidden constants of the error bound and of the noise-learning threshold.
/// The bounds only fix orders of growth, so these default to 1.
struct TheoryConstants {
  double c_bias = 1.0;
  double c_var = 1.0;
  double c_noise = 1.0;
  double c_tstar = 1.0;
};

/// Degrees of freedom of a rank-r update of a d x k matrix: r (d + k - r).
std::size_t capacity(std::size_t r, std::size_t d, std::size_t k);

struct ErrorDecomposition {
  double bias = 0.0;      // c_bias r^-2alpha
  double variance = 0.0;  // c_var r d / n
  double noise = 0.0;     // c_noise eta r d / n
  double total = 0.0;
};

/// Rank is real-valued so the curve can be scanned continuously.
ErrorDecomposition error_decomposition(double r, double n, double d, double eta, double alpha,
                                       const TheoryConstants& c = {});

/// (n / (d (1 + eta)))^(1 / (2 alpha + 1)), the scaling law without constants.
/// Accepts eta in [0, 1].
double optimal_rank_scaling(double n, double d, double eta, double alpha);

/// Exact minimizer of error_decomposition over r > 0:
/// (2 alpha c_bias n / ((c_var + c_noise eta) d))^(1 / (2 alpha + 1)).
double optimal_rank_exact(double n, double d, double eta, double alpha, const TheoryConstants& c = {});

/// Grid member with the smallest total error; ties go to the smaller rank.
std::size_t optimal_rank_on_grid(std::span<const std::size_t> ranks, double n, double d, double eta,
                                 double alpha, const TheoryConstants& c = {});

/// c / (gamma sigma_r) * ln(1 / eta), in gradient-flow time units (read as
/// epochs). Returns nullopt for eta = 0, where the threshold is unbounded.
std::optional<double> noise_threshold_t_star(double gamma, double sigma_r, double eta,
                                             const TheoryConstants& c = {});

/// -slope / 2 of the least-squares line through (log r, log bias).
/// Needs at least three points with positive values.
double fit_alpha(std::span<const double> ranks, std::span<const double> bias);

/// fit_alpha on the teacher's rank-r tail energies for r = 2, 4, 8, ... below
/// its intrinsic rank / 2 (or all r in [1, r*-1] if that leaves fewer than 3).
double fit_alpha(const data::Teacher& teacher);

}  // namespace loralab::theory
