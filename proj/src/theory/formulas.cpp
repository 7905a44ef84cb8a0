// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#include "loralab/theory/formulas.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "loralab/errors.hpp"

namespace loralab::theory {

namespace {

void check_positive(double v, const char* name, const char* where) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ArgumentError(std::string(where) + ": " + name + " must be positive and finite");
  }
}

void check_constants(const TheoryConstants& c, const char* where) {
  check_positive(c.c_bias, "c_bias", where);
  check_positive(c.c_var, "c_var", where);
  check_positive(c.c_noise, "c_noise", where);
  check_positive(c.c_tstar, "c_tstar", where);
}

void check_eta(double eta, const char* where) {
  if (!(eta >= 0.0 && eta < 1.0)) throw ArgumentError(std::string(where) + ": eta must lie in [0, 1)");
}

}  // namespace

std::size_t capacity(std::size_t r, std::size_t d, std::size_t k) {
  if (r > std::min(d, k)) {
    throw ArgumentError("capacity: rank " + std::to_string(r) + " exceeds min(d, k)");
  }
  return r * (d + k - r);
}

ErrorDecomposition error_decomposition(double r, double n, double d, double eta, double alpha,
                                       const TheoryConstants& c) {
  constexpr const char* where = "error_decomposition";
  check_positive(r, "rank", where);
  check_positive(n, "n", where);
  check_positive(d, "d", where);
  check_positive(alpha, "alpha", where);
  check_eta(eta, where);
  check_constants(c, where);
  ErrorDecomposition e;
  e.bias = c.c_bias * std::pow(r, -2.0 * alpha);
  e.variance = c.c_var * r * d / n;
  e.noise = c.c_noise * eta * r * d / n;
  e.total = e.bias + e.variance + e.noise;
  return e;
}

double optimal_rank_scaling(double n, double d, double eta, double alpha) {
  constexpr const char* where = "optimal_rank_scaling";
  check_positive(n, "n", where);
  check_positive(d, "d", where);
  check_positive(alpha, "alpha", where);
  if (!(eta >= 0.0 && eta <= 1.0)) throw ArgumentError(std::string(where) + ": eta must lie in [0, 1]");
  return std::pow(n / (d * (1.0 + eta)), 1.0 / (2.0 * alpha + 1.0));
}

double optimal_rank_exact(double n, double d, double eta, double alpha, const TheoryConstants& c) {
  constexpr const char* where = "optimal_rank_exact";
  check_positive(n, "n", where);
  check_positive(d, "d", where);
  check_positive(alpha, "alpha", where);
  check_eta(eta, where);
  check_constants(c, where);
  // Stationary point of c_bias r^-2a + (c_var + c_noise eta) d r / n.
  const double slope = (c.c_var + c.c_noise * eta) * d / n;
  return std::pow(2.0 * alpha * c.c_bias / slope, 1.0 / (2.0 * alpha + 1.0));
}

std::size_t optimal_rank_on_grid(std::span<const std::size_t> ranks, double n, double d, double eta,
                                 double alpha, const TheoryConstants& c) {
  if (ranks.empty()) throw ArgumentError("optimal_rank_on_grid: empty grid");
  std::size_t best = 0;
  double best_total = 0.0;
  for (std::size_t r : ranks) {
    const double total = error_decomposition(static_cast<double>(r), n, d, eta, alpha, c).total;
    if (best == 0 || total < best_total || (total == best_total && r < best)) {
      best = r;
      best_total = total;
    }
  }
  return best;
}

std::optional<double> noise_threshold_t_star(double gamma, double sigma_r, double eta,
                                             const TheoryConstants& c) {
  constexpr const char* where = "noise_threshold_t_star";
  check_positive(gamma, "gamma", where);
  check_positive(sigma_r, "sigma_r", where);
  check_constants(c, where);
  check_eta(eta, where);
  if (eta == 0.0) return std::nullopt;
  return c.c_tstar / (gamma * sigma_r) * std::log(1.0 / eta);
}

double fit_alpha(std::span<const double> ranks, std::span<const double> bias) {
  if (ranks.size() != bias.size()) throw ArgumentError("fit_alpha: ranks and bias differ in length");
  if (ranks.size() < 3) throw ArgumentError("fit_alpha: need at least 3 rank points");
  const double n = static_cast<double>(ranks.size());
  double sx = 0.0, sy = 0.0;
  std::vector<double> lx(ranks.size()), ly(ranks.size());
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (!(ranks[i] > 0.0) || !(bias[i] > 0.0)) {
      throw ArgumentError("fit_alpha: ranks and bias estimates must be positive");
    }
    lx[i] = std::log(ranks[i]);
    ly[i] = std::log(bias[i]);
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0) throw ArgumentError("fit_alpha: ranks must not all be equal");
  return -(sxy / sxx) / 2.0;
}

double fit_alpha(const data::Teacher& teacher) {
  const std::size_t rstar = teacher.intrinsic_rank;
  std::vector<double> ranks;
  for (std::size_t r = 2; 2 * r <= rstar; r *= 2) ranks.push_back(static_cast<double>(r));
  if (ranks.size() < 3) {
    ranks.clear();
    for (std::size_t r = 1; r < rstar; ++r) ranks.push_back(static_cast<double>(r));
  }
  std::vector<double> tails;
  for (double r : ranks) tails.push_back(data::tail_energy(teacher, static_cast<std::size_t>(r)));
  return fit_alpha(ranks, tails);
}

}  // namespace loralab::theory
