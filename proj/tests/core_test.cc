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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qss/angle.hpp"
#include "qss/error.hpp"
#include "qss/linalg.hpp"
#include "qss/rng.hpp"
#include "qss/state.hpp"
#include "test_util.h"

using namespace qss;
using namespace qss_test;

TEST(RotationAngle, canonical_range) {
  EXPECT_DOUBLE_EQ(RotationAngle(-0.25).radians(), kTwoPi - 0.25);
  EXPECT_EQ(RotationAngle(kTwoPi).radians(), 0.0);
  EXPECT_NEAR(RotationAngle(-1.5 * std::numbers::pi).radians(), 0.5 * std::numbers::pi, 1e-15);
  EXPECT_NEAR((RotationAngle(6.0) + RotationAngle(1.0)).radians(), 7.0 - kTwoPi, 1e-15);
  EXPECT_NEAR(RotationAngle(0.1).circular_distance(RotationAngle(kTwoPi - 0.1)), 0.2, 1e-15);
  EXPECT_THROW((void)RotationAngle(std::nan("")), InvalidArgument);
  EXPECT_THROW((void)RotationAngle(HUGE_VAL), InvalidArgument);
}

TEST(Rng, deterministic_and_in_range) {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    differs |= x != c.next_u64();
  }
  EXPECT_TRUE(differs);
  for (int i = 0; i < 10000; ++i) {
    const double u = a.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(a.uniform_index(7), 7u);
  }
  EXPECT_THROW(a.uniform_index(0), InvalidArgument);
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  EXPECT_EQ(derive_seed(5, 9), derive_seed(5, 9));
}

TEST(Matrix, kron_and_products) {
  const Matrix x{{0, 1}, {1, 0}};
  const Matrix z{{1, 0}, {0, -1}};
  const Matrix xz = kron(x, z);
  EXPECT_EQ(xz(0, 2), Complex(1));
  EXPECT_EQ(xz(1, 3), Complex(-1));
  EXPECT_EQ(xz(0, 0), Complex(0));
  EXPECT_EQ((x * x), Matrix::identity(2));
  EXPECT_EQ((x * z + z * x), Matrix(2));
  EXPECT_NEAR(frobenius_norm(xz), 2.0, 1e-15);
  EXPECT_THROW(x * Matrix::identity(4), DimensionError);
}

TEST(Matrix, hermitian_eigenvalues) {
  const Matrix y{{0, Complex(0, -1)}, {Complex(0, 1), 0}};
  auto ev = hermitian_eigenvalues(y);
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_NEAR(ev[0], -1.0, 1e-14);
  EXPECT_NEAR(ev[1], 1.0, 1e-14);

  // 2x2 closed form: (a+d)/2 ± sqrt(((a-d)/2)^2 + |b|^2).
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const double a = gaussian(rng), d = gaussian(rng);
    const Complex b(gaussian(rng), gaussian(rng));
    const Matrix h{{a, b}, {std::conj(b), d}};
    const double mid = 0.5 * (a + d), rad = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(b));
    ev = hermitian_eigenvalues(h);
    EXPECT_NEAR(ev[0], mid - rad, 1e-12);
    EXPECT_NEAR(ev[1], mid + rad, 1e-12);
  }

  // U diag(λ) U† recovers λ.
  for (std::size_t dim : {3u, 4u, 8u}) {
    const Unitary u = random_unitary(rng, dim);
    Matrix diag(dim);
    std::vector<double> want;
    for (std::size_t k = 0; k < dim; ++k) {
      want.push_back(static_cast<double>(k) - 1.5);
      diag(k, k) = want.back();
    }
    ev = hermitian_eigenvalues(u.matrix() * diag * u.matrix().adjoint());
    for (std::size_t k = 0; k < dim; ++k) EXPECT_NEAR(ev[k], want[k], 1e-11);
  }
  EXPECT_THROW(hermitian_eigenvalues(Matrix{{0, 1}, {0, 0}}), InvalidArgument);
}

TEST(Unitary, validates) {
  EXPECT_NO_THROW(Unitary(Matrix{{0, 1}, {1, 0}}));
  EXPECT_THROW(Unitary(Matrix{{1, 1}, {0, 1}}), InvariantViolation);
  const Unitary r = rotation_operator(RotationAngle(0.3));
  EXPECT_LT((r * r.adjoint()).matrix().max_abs_diff(Matrix::identity(2)), 1e-15);
}

TEST(DensityMatrix, validates) {
  EXPECT_NO_THROW(DensityMatrix(Matrix{{0.5, 0}, {0, 0.5}}));
  EXPECT_THROW(DensityMatrix(Matrix{{0.6, 0}, {0, 0.6}}), InvariantViolation);
  EXPECT_THROW(DensityMatrix(Matrix{{1.5, 0}, {0, -0.5}}), InvariantViolation);
  EXPECT_THROW(DensityMatrix(Matrix{{0.5, 1}, {0, 0.5}}), InvariantViolation);
  EXPECT_NEAR(DensityMatrix(Matrix{{0.5, 0}, {0, 0.5}}).purity(), 0.5, 1e-15);
}

TEST(StateVector, validates) {
  EXPECT_THROW(StateVector(1, {1, 1}), InvariantViolation);
  EXPECT_THROW(StateVector(2, {1, 0}), DimensionError);
  EXPECT_THROW(StateVector(1, {std::nan(""), 0}), InvariantViolation);
  EXPECT_THROW(StateVector::normalized(1, {0, 0}), InvalidArgument);
  EXPECT_THROW(StateVector::basis(1, 2), InvalidArgument);
  EXPECT_EQ(StateVector::basis(2, 2)[2], Complex(1));
  EXPECT_NEAR(StateVector::normalized(1, {3, 4})[1].real(), 0.8, 1e-15);
}

TEST(StateVector, rotation_convention) {
  const StateVector psi = apply_unitary(StateVector::basis(1, 0), {0}, rotation_operator(RotationAngle(0.4)));
  EXPECT_NEAR(psi[0].real(), std::cos(0.4), 1e-15);
  EXPECT_NEAR(psi[1].real(), std::sin(0.4), 1e-15);
  const StateVector flipped = apply_unitary(StateVector::basis(1, 0), {0}, minus_i_sigma_y());
  EXPECT_EQ(flipped, StateVector::basis(1, 1));
  EXPECT_EQ(apply_unitary(StateVector::basis(1, 1), {0}, minus_i_sigma_y())[0], Complex(-1));
}

TEST(StateVector, apply_unitary_matches_kron) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const StateVector psi = StateVector::normalized(
        3, {Complex(gaussian(rng), gaussian(rng)), gaussian(rng), gaussian(rng), gaussian(rng), gaussian(rng),
            gaussian(rng), Complex(0, gaussian(rng)), gaussian(rng)});
    const Unitary u = random_unitary(rng, 2);
    const Matrix i2 = Matrix::identity(2);
    EXPECT_LT(max_diff(apply_unitary(psi, {0}, u), mul(kron(u.matrix(), kron(i2, i2)), psi)), 1e-14);
    EXPECT_LT(max_diff(apply_unitary(psi, {1}, u), mul(kron(i2, kron(u.matrix(), i2)), psi)), 1e-14);
    EXPECT_LT(max_diff(apply_unitary(psi, {2}, u), mul(kron(i2, kron(i2, u.matrix())), psi)), 1e-14);
    const Unitary u2 = random_unitary(rng, 4);
    EXPECT_LT(max_diff(apply_unitary(psi, {0, 1}, u2), mul(kron(u2.matrix(), i2), psi)), 1e-14);
    // Reversed target order swaps the roles of the two qubits.
    const Matrix swap{{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}};
    const Matrix swapped = swap * u2.matrix() * swap;
    EXPECT_LT(max_diff(apply_unitary(psi, {1, 0}, u2), mul(kron(swapped, i2), psi)), 1e-14);
  }
  const StateVector psi = StateVector::basis(2, 0);
  EXPECT_THROW(apply_unitary(psi, {2}, minus_i_sigma_y()), InvalidArgument);
  EXPECT_THROW(apply_unitary(psi, {0, 0}, random_unitary(rng, 4)), InvalidArgument);
  EXPECT_THROW(apply_unitary(psi, {0}, random_unitary(rng, 4)), DimensionError);
}

// Oracle: the full controlled matrix built entry by entry.
TEST(StateVector, apply_controlled_matches_explicit_matrix) {
  Rng rng(5);
  for (std::size_t n : {2u, 3u, 4u}) {
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t target = rng.uniform_index(n);
      std::vector<std::size_t> controls;
      for (std::size_t q = 0; q < n; ++q)
        if (q != target && rng.bit()) controls.push_back(q);
      if (controls.empty()) controls.push_back((target + 1) % n);
      const Unitary u = random_unitary(rng, 2);
      const std::size_t dim = std::size_t{1} << n;
      Matrix full(dim);
      for (std::size_t col = 0; col < dim; ++col) {
        bool active = true;
        for (auto c : controls) active &= bit_of(col, c, n);
        if (!active) {
          full(col, col) = 1;
          continue;
        }
        const std::size_t tbit = bit_of(col, target, n);
        const std::size_t mask = std::size_t{1} << (n - 1 - target);
        for (std::size_t out = 0; out < 2; ++out) full((col & ~mask) | (out ? mask : 0), col) = u.matrix()(out, tbit);
      }
      std::vector<Complex> amps(dim);
      for (auto &z : amps) z = Complex(gaussian(rng), gaussian(rng));
      const StateVector psi = StateVector::normalized(n, amps);
      EXPECT_LT(max_diff(apply_controlled(psi, controls, target, u), mul(full, psi)), 1e-14);
    }
  }
  EXPECT_THROW(apply_controlled(StateVector::basis(2, 0), {1}, 1, minus_i_sigma_y()), InvalidArgument);
}

TEST(StateVector, controlled_controlled_flip_truth_table) {
  for (std::size_t idx = 0; idx < 8; ++idx) {
    const StateVector out = apply_controlled(StateVector::basis(3, idx), {0, 1}, 2, minus_i_sigma_y());
    if (idx < 6) {
      EXPECT_EQ(out, StateVector::basis(3, idx));
    } else {
      EXPECT_NEAR(std::abs(out[idx ^ 1]), 1.0, 1e-15);
    }
  }
}

TEST(Measurement, born_frequency) {
  const double theta = 0.7;
  const StateVector psi(1, {std::cos(theta), std::sin(theta)});
  const auto projectors = z_basis_projectors();
  const double p0 = std::cos(theta) * std::cos(theta);
  Rng rng(2024);
  const int n = 100000;
  int zeros = 0;
  for (int i = 0; i < n; ++i) {
    const auto m = measure_projective(psi, std::vector<std::size_t>{0}, projectors, rng);
    zeros += m.outcome == 0;
    if (m.outcome == 0) {
      ASSERT_NEAR(m.probability, p0, 1e-15);
      ASSERT_LT(max_diff(m.collapsed, StateVector::basis(1, 0)), 1e-15);
    }
  }
  const double sigma = std::sqrt(p0 * (1 - p0) / n);
  EXPECT_LE(std::fabs(static_cast<double>(zeros) / n - p0), 4 * sigma);
}

TEST(Measurement, one_draw_per_call) {
  Rng a(9), b(9);
  const auto projectors = z_basis_projectors();
  for (int i = 0; i < 10; ++i) {
    measure_projective(StateVector::basis(1, 0), std::vector<std::size_t>{0}, projectors, a);
    b.uniform();
  }
  EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Measurement, rejects_bad_projectors) {
  Rng rng(1);
  const StateVector psi = StateVector::basis(1, 0);
  const std::vector<Matrix> incomplete{Matrix{{1, 0}, {0, 0}}};
  const std::vector<Matrix> overlapping{Matrix{{1, 0}, {0, 0}}, Matrix{{1, 0}, {0, 0}}};
  const std::vector<Matrix> not_idempotent{Matrix{{0.5, 0}, {0, 0.5}}, Matrix{{0.5, 0}, {0, 0.5}}};
  const std::vector<std::size_t> t{0};
  EXPECT_THROW(measure_projective(psi, t, incomplete, rng), InvalidArgument);
  EXPECT_THROW(measure_projective(psi, t, overlapping, rng), InvalidArgument);
  EXPECT_THROW(measure_projective(psi, t, not_idempotent, rng), InvalidArgument);
}

TEST(Measurement, outcome_probabilities_on_subsystem) {
  // (|00⟩ + |11⟩)/√2 measured on qubit 1.
  const StateVector bell = StateVector::normalized(2, {1, 0, 0, 1});
  const auto projectors = z_basis_projectors();
  const auto p = outcome_probabilities(bell, std::vector<std::size_t>{1}, projectors);
  EXPECT_NEAR(p[0], 0.5, 1e-15);
  EXPECT_NEAR(p[1], 0.5, 1e-15);
  Rng rng(4);
  const auto m = measure_projective(bell, std::vector<std::size_t>{1}, projectors, rng);
  EXPECT_EQ(m.collapsed, StateVector::basis(2, m.outcome ? 3 : 0));
}

TEST(PartialTrace, product_and_bell) {
  const StateVector a = StateVector::normalized(1, {1, Complex(0, 2)});
  const StateVector b = StateVector::normalized(1, {3, 1});
  const StateVector ab = tensor(a, b);
  EXPECT_LT(partial_trace(ab, {0}).matrix().max_abs_diff(pure_density(a).matrix()), 1e-15);
  EXPECT_LT(partial_trace(ab, {1}).matrix().max_abs_diff(pure_density(b).matrix()), 1e-15);
  const StateVector bell = StateVector::normalized(2, {1, 0, 0, 1});
  EXPECT_LT(partial_trace(bell, {0}).matrix().max_abs_diff(Matrix{{0.5, 0}, {0, 0.5}}), 1e-15);
  // Keeping everything in swapped order permutes the basis.
  const StateVector s = StateVector::basis(2, 1);
  EXPECT_NEAR(partial_trace(s, {1, 0})(2, 2).real(), 1.0, 1e-15);
  EXPECT_THROW(partial_trace(s, {0, 0}), InvalidArgument);
}

// Oracle: for pure states, TD = sqrt(1 - |⟨a|b⟩|²).
TEST(TraceDistance, pure_state_formula) {
  Rng rng(77);
  for (std::size_t n : {1u, 2u, 3u}) {
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<Complex> x(std::size_t{1} << n), y(x.size());
      for (auto &z : x) z = Complex(gaussian(rng), gaussian(rng));
      for (auto &z : y) z = Complex(gaussian(rng), gaussian(rng));
      const StateVector a = StateVector::normalized(n, x), b = StateVector::normalized(n, y);
      const double want = std::sqrt(std::max(0.0, 1 - std::norm(inner_product(a, b))));
      EXPECT_NEAR(trace_distance(pure_density(a), pure_density(b)), want, 1e-12);
    }
  }
  const DensityMatrix mixed(Matrix{{0.5, 0}, {0, 0.5}});
  EXPECT_NEAR(trace_distance(mixed, pure_density(StateVector::basis(1, 0))), 0.5, 1e-15);
  EXPECT_EQ(trace_distance(mixed, mixed), 0.0);
}

TEST(StateVector, global_phase_equal) {
  const StateVector a = StateVector::normalized(2, {1, 2, Complex(0, 1), 0});
  std::vector<Complex> rotated(a.amplitudes().begin(), a.amplitudes().end());
  for (auto &z : rotated) z *= std::polar(1.0, 1.234);
  EXPECT_TRUE(global_phase_equal(a, StateVector(2, rotated)));
  EXPECT_FALSE(global_phase_equal(a, StateVector::basis(2, 0)));
  EXPECT_THROW(global_phase_equal(StateVector::basis(1, 0), StateVector::basis(2, 0)), DimensionError);
}
