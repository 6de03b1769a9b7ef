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

#include "qss/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qss/error.hpp"

namespace qss {

Matrix::Matrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {}

Matrix::Matrix(std::size_t dim, std::vector<Complex> entries) : dim_(dim), entries_(std::move(entries)) {
  if (entries_.size() != dim_ * dim_) {
    throw DimensionError("matrix entry count " + std::to_string(entries_.size()) + " is not " +
                         std::to_string(dim_) + "^2");
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<Complex>> rows) : dim_(rows.size()) {
  entries_.reserve(dim_ * dim_);
  for (const auto &row : rows) {
    if (row.size() != dim_) throw DimensionError("matrix literal is not square");
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
}

Matrix Matrix::identity(std::size_t dim) {
  Matrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::adjoint() const {
  Matrix out(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

Complex Matrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

Matrix Matrix::operator*(const Matrix &rhs) const {
  if (rhs.dim_ != dim_) throw DimensionError("matrix product of unequal dims");
  Matrix out(dim_);
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t k = 0; k < dim_; ++k) {
      const Complex a = (*this)(r, k);
      if (a == Complex{}) continue;
      for (std::size_t c = 0; c < dim_; ++c) out(r, c) += a * rhs(k, c);
    }
  }
  return out;
}

Matrix Matrix::operator+(const Matrix &rhs) const {
  if (rhs.dim_ != dim_) throw DimensionError("matrix sum of unequal dims");
  Matrix out = *this;
  for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] += rhs.entries_[i];
  return out;
}

Matrix Matrix::operator-(const Matrix &rhs) const {
  if (rhs.dim_ != dim_) throw DimensionError("matrix difference of unequal dims");
  Matrix out = *this;
  for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] -= rhs.entries_[i];
  return out;
}

Matrix Matrix::operator*(Complex s) const {
  Matrix out = *this;
  for (auto &e : out.entries_) e *= s;
  return out;
}

bool Matrix::all_finite() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const Complex &z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

double Matrix::max_abs_diff(const Matrix &rhs) const {
  if (rhs.dim_ != dim_) throw DimensionError("comparing matrices of unequal dims");
  double m = 0.0;
  for (std::size_t i = 0; i < entries_.size(); ++i) m = std::max(m, std::abs(entries_[i] - rhs.entries_[i]));
  return m;
}

bool Matrix::is_hermitian(double tol) const { return max_abs_diff(adjoint()) <= tol; }

Matrix kron(const Matrix &a, const Matrix &b) {
  const std::size_t n = a.dim() * b.dim();
  Matrix out(n);
  for (std::size_t ar = 0; ar < a.dim(); ++ar)
    for (std::size_t ac = 0; ac < a.dim(); ++ac)
      for (std::size_t br = 0; br < b.dim(); ++br)
        for (std::size_t bc = 0; bc < b.dim(); ++bc)
          out(ar * b.dim() + br, ac * b.dim() + bc) = a(ar, ac) * b(br, bc);
  return out;
}

double frobenius_norm(const Matrix &m) {
  double s = 0.0;
  for (const auto &z : m.entries()) s += std::norm(z);
  return std::sqrt(s);
}

namespace {

double off_diagonal_norm(const std::vector<double> &a, std::size_t n) {
  double s = 0.0;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      if (p != q) s += a[p * n + q] * a[p * n + q];
  return std::sqrt(s);
}

// Cyclic Jacobi on a real symmetric n×n matrix (row-major, destroyed).
std::vector<double> jacobi_eigenvalues(std::vector<double> a, std::size_t n) {
  double scale = 0.0;
  for (double x : a) scale += x * x;
  scale = std::sqrt(scale);
  const double target = std::max(1e-15 * scale, 1e-300);
  constexpr int kMaxSweeps = 100;

  for (int sweep = 0; sweep < kMaxSweeps && off_diagonal_norm(a, n) > target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        const double theta = (aqq - app) / (2.0 * apq);
        double t = 1.0 / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        if (!std::isfinite(theta)) t = 0.5 / theta;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        a[p * n + p] = app - t * apq;
        a[q * n + q] = aqq + t * apq;
        a[p * n + q] = a[q * n + p] = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a[r * n + p];
          const double arq = a[r * n + q];
          const double new_rp = arp - s * (arq + tau * arp);
          const double new_rq = arq + s * (arp - tau * arq);
          a[r * n + p] = a[p * n + r] = new_rp;
          a[r * n + q] = a[q * n + r] = new_rq;
        }
      }
    }
  }
  if (off_diagonal_norm(a, n) > std::max(1e-12, 1e-12 * scale)) {
    throw InvariantViolation("Jacobi eigensolver failed to converge");
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a[i * n + i];
  std::sort(eig.begin(), eig.end());
  return eig;
}

}  // namespace

std::vector<double> hermitian_eigenvalues(const Matrix &h) {
  if (!h.all_finite()) throw InvalidArgument("eigenvalues of a non-finite matrix");
  if (!h.is_hermitian(kInvariantTol)) throw InvalidArgument("eigenvalues requested for a non-Hermitian matrix");
  const std::size_t n = h.dim();
  const std::size_t m = 2 * n;
  std::vector<double> s(m * m);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      // Symmetrize so that tiny Hermiticity defects do not bias the result.
      const Complex z = 0.5 * (h(r, c) + std::conj(h(c, r)));
      s[r * m + c] = z.real();
      s[(r + n) * m + (c + n)] = z.real();
      s[r * m + (c + n)] = -z.imag();
      s[(r + n) * m + c] = z.imag();
    }
  }
  const std::vector<double> doubled = jacobi_eigenvalues(std::move(s), m);
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = 0.5 * (doubled[2 * i] + doubled[2 * i + 1]);
  return eig;
}

Unitary::Unitary(Matrix m) : m_(std::move(m)) {
  if (m_.dim() == 0) throw DimensionError("unitary of dimension 0");
  if (!m_.all_finite()) throw InvariantViolation("unitary has non-finite entries");
  const double err = (m_.adjoint() * m_).max_abs_diff(Matrix::identity(m_.dim()));
  if (err > kInvariantTol) {
    throw InvariantViolation("matrix is not unitary (|U†U - I| = " + std::to_string(err) + ")");
  }
}

Unitary Unitary::adjoint() const { return Unitary(m_.adjoint(), Unchecked{}); }

Unitary Unitary::operator*(const Unitary &rhs) const { return Unitary(m_ * rhs.m_); }

DensityMatrix::DensityMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.dim() == 0) throw DimensionError("density matrix of dimension 0");
  if (!m_.all_finite()) throw InvariantViolation("density matrix has non-finite entries");
  if (!m_.is_hermitian(kInvariantTol)) throw InvariantViolation("density matrix is not Hermitian");
  if (std::abs(m_.trace() - Complex{1.0}) > kInvariantTol) {
    throw InvariantViolation("density matrix trace is not 1");
  }
  const auto eig = hermitian_eigenvalues(m_);
  if (eig.front() < -kInvariantTol) throw InvariantViolation("density matrix has a negative eigenvalue");
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

double trace_distance(const DensityMatrix &a, const DensityMatrix &b) {
  if (a.dim() != b.dim()) throw DimensionError("trace distance between unequal dims");
  const auto eig = hermitian_eigenvalues(a.matrix() - b.matrix());
  double s = 0.0;
  for (double e : eig) s += std::fabs(e);
  return std::clamp(0.5 * s, 0.0, 1.0);
}

}  // namespace qss
