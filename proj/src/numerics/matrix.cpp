// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#include "loralab/numerics/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "loralab/errors.hpp"
#include "loralab/kernels/kernels.hpp"

namespace loralab::numerics {

namespace {

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_nonempty(const Matrix& m, const char* what) {
  if (m.empty()) throw DimensionError(std::string(what) + ": empty matrix");
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": shape mismatch " + shape(a) + " vs " + shape(b));
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  if (rows == 0 || cols == 0) throw DimensionError("Matrix: rows and cols must be positive");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (rows == 0 || cols == 0) throw DimensionError("Matrix: rows and cols must be positive");
  if (data_.size() != rows * cols) {
    throw DimensionError("Matrix: data length " + std::to_string(data_.size()) +
                         " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  if (rows_ == 0 || cols_ == 0) throw DimensionError("Matrix: rows and cols must be positive");
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("Matrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

bool Matrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void Matrix::fill(double v) noexcept { std::fill(data_.begin(), data_.end(), v); }

Matrix matmul(const Matrix& a, const Matrix& b) {
  require_nonempty(a, "matmul");
  require_nonempty(b, "matmul");
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: " + shape(a) + " times " + shape(b));
  }
  const auto& k = kernels::active();
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* out = c.row(i).data();
    for (std::size_t p = 0; p < a.cols(); ++p) {
      const double s = a(i, p);
      if (s != 0.0) k.axpy(s, b.row(p).data(), out, b.cols());
    }
  }
  return c;
}

Matrix transpose(const Matrix& m) {
  require_nonempty(m, "transpose");
  Matrix t(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  return t;
}

std::vector<double> matvec(const Matrix& m, std::span<const double> x) {
  require_nonempty(m, "matvec");
  if (x.size() != m.cols()) {
    throw DimensionError("matvec: " + shape(m) + " times vector of length " +
                         std::to_string(x.size()));
  }
  const auto& k = kernels::active();
  std::vector<double> y(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) y[i] = k.dot(m.row(i).data(), x.data(), m.cols());
  return y;
}

std::vector<double> matvec_transposed(const Matrix& m, std::span<const double> x) {
  require_nonempty(m, "matvec_transposed");
  if (x.size() != m.rows()) {
    throw DimensionError("matvec_transposed: " + shape(m) + "^T times vector of length " +
                         std::to_string(x.size()));
  }
  const auto& k = kernels::active();
  std::vector<double> y(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (x[i] != 0.0) k.axpy(x[i], m.row(i).data(), y.data(), m.cols());
  }
  return y;
}

void add_outer(Matrix& m, double alpha, std::span<const double> u, std::span<const double> v) {
  if (u.size() != m.rows() || v.size() != m.cols()) {
    throw DimensionError("add_outer: " + shape(m) + " vs outer " + std::to_string(u.size()) +
                         "x" + std::to_string(v.size()));
  }
  const auto& k = kernels::active();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double s = alpha * u[i];
    if (s != 0.0) k.axpy(s, v.data(), m.row(i).data(), m.cols());
  }
}

Matrix add(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "add");
  Matrix c = a;
  kernels::active().axpy(1.0, b.data(), c.data(), c.size());
  return c;
}

Matrix subtract(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "subtract");
  Matrix c = a;
  kernels::active().axpy(-1.0, b.data(), c.data(), c.size());
  return c;
}

Matrix scaled(const Matrix& m, double alpha) {
  Matrix c = m;
  kernels::active().scale(alpha, c.data(), c.size());
  return c;
}

void axpy(double alpha, const Matrix& x, Matrix& y) {
  require_same_shape(x, y, "axpy");
  kernels::active().axpy(alpha, x.data(), y.data(), y.size());
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
  return kernels::active().dot(a.data(), b.data(), a.size());
}

double frobenius_norm_squared(const Matrix& m) {
  return kernels::active().sum_squares(m.data(), m.size());
}

double frobenius_norm(const Matrix& m) { return std::sqrt(frobenius_norm_squared(m)); }

std::size_t argmax(std::span<const double> v) {
  if (v.empty()) throw ArgumentError("argmax: empty vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

}  // namespace loralab::numerics
