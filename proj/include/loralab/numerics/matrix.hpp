// Copyright (C) 2026 loralab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace loralab::numerics {

/// Dense row-major matrix of doubles.
///
/// A zero-sized matrix is representable (default construction) so that
/// containers can hold moved-from values, but every public operation rejects it.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }
  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }

  bool all_finite() const noexcept;
  void fill(double v) noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Standard product; throws DimensionError unless a.cols() == b.rows().
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& m);

/// m * x for a vector x of length m.cols().
std::vector<double> matvec(const Matrix& m, std::span<const double> x);
/// mᵀ * x for a vector x of length m.rows().
std::vector<double> matvec_transposed(const Matrix& m, std::span<const double> x);

/// m += alpha * u vᵀ
void add_outer(Matrix& m, double alpha, std::span<const double> u, std::span<const double> v);

Matrix add(const Matrix& a, const Matrix& b);
Matrix subtract(const Matrix& a, const Matrix& b);
Matrix scaled(const Matrix& m, double alpha);
void axpy(double alpha, const Matrix& x, Matrix& y);

double dot(std::span<const double> a, std::span<const double> b);
double frobenius_norm(const Matrix& m);
double frobenius_norm_squared(const Matrix& m);

/// Index of the largest entry; ties resolve to the lowest index.
std::size_t argmax(std::span<const double> v);

}  // namespace loralab::numerics
