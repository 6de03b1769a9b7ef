// Copyright 2026 The qsslab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace qss {

using Complex = std::complex<double>;

/// Tolerance for stored-value invariants (norm, unitarity, Hermiticity).
inline constexpr double kInvariantTol = 1e-10;
/// Tolerance for single-operation algebraic identities.
inline constexpr double kIdentityTol = 1e-12;

/// Dense square complex matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t dim);
  Matrix(std::size_t dim, std::vector<Complex> entries);
  Matrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static Matrix identity(std::size_t dim);

  std::size_t dim() const { return dim_; }
  const Complex &operator()(std::size_t r, std::size_t c) const { return entries_[r * dim_ + c]; }
  Complex &operator()(std::size_t r, std::size_t c) { return entries_[r * dim_ + c]; }
  const std::vector<Complex> &entries() const { return entries_; }

  Matrix adjoint() const;
  Complex trace() const;

  Matrix operator*(const Matrix &rhs) const;
  Matrix operator+(const Matrix &rhs) const;
  Matrix operator-(const Matrix &rhs) const;
  Matrix operator*(Complex s) const;

  bool all_finite() const;
  /// Largest entrywise modulus of (this - rhs).
  double max_abs_diff(const Matrix &rhs) const;
  bool is_hermitian(double tol = kInvariantTol) const;

  bool operator==(const Matrix &) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> entries_;
};

Matrix kron(const Matrix &a, const Matrix &b);
/// Frobenius norm.
double frobenius_norm(const Matrix &m);

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// The n×n Hermitian H = A + iB is embedded as the real symmetric 2n×2n
/// matrix [[A, -B], [B, A]] and diagonalized by cyclic Jacobi sweeps until
/// the off-diagonal Frobenius norm is below 1e-15·‖H‖ (throws if it cannot
/// reach 1e-12·max(1, ‖H‖)). Each eigenvalue of H appears twice in the
/// embedding; the pair average is returned.
std::vector<double> hermitian_eigenvalues(const Matrix &h);

/// Square matrix with U†U = I within kInvariantTol; checked on construction.
class Unitary {
 public:
  explicit Unitary(Matrix m);
  std::size_t dim() const { return m_.dim(); }
  const Matrix &matrix() const { return m_; }
  Unitary adjoint() const;
  Unitary operator*(const Unitary &rhs) const;

 private:
  struct Unchecked {};
  Unitary(Matrix m, Unchecked) : m_(std::move(m)) {}
  Matrix m_;
};

/// Hermitian, unit-trace, positive semidefinite matrix; checked on
/// construction.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix m);
  std::size_t dim() const { return m_.dim(); }
  const Matrix &matrix() const { return m_; }
  const Complex &operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
  double purity() const;

 private:
  Matrix m_;
};

/// ½ Σ|λᵢ(a − b)|.
double trace_distance(const DensityMatrix &a, const DensityMatrix &b);

}  // namespace qss
