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

#include <cstddef>
#include <span>
#include <vector>

#include "qss/angle.hpp"
#include "qss/linalg.hpp"
#include "qss/rng.hpp"

namespace qss {

/// Upper bound on register width. Dense 2^n storage, so this stays small.
inline constexpr std::size_t kMaxQubits = 10;

/// Normalized pure state over n qubits.
///
/// Basis-index convention: qubit 0 is the MOST significant bit of the
/// amplitude index, so for two qubits |q0 q1⟩ lives at index 2·q0 + q1
/// and |10⟩ is index 2.
class StateVector {
 public:
  /// Validates length 2^n, finiteness and unit norm (within kInvariantTol).
  StateVector(std::size_t num_qubits, std::vector<Complex> amplitudes);

  static StateVector basis(std::size_t num_qubits, std::size_t index);
  /// Rescales an arbitrary nonzero vector to unit norm.
  static StateVector normalized(std::size_t num_qubits, std::vector<Complex> amplitudes);

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  const Complex &operator[](std::size_t i) const { return amplitudes_[i]; }
  double norm() const;

  bool operator==(const StateVector &) const = default;

 private:
  std::size_t num_qubits_;
  std::vector<Complex> amplitudes_;
};

/// Real rotation [[cosθ, −sinθ], [sinθ, cosθ]], so that
/// rotation_operator(θ)|0⟩ = cosθ|0⟩ + sinθ|1⟩.
Unitary rotation_operator(RotationAngle theta);

/// The bit-flip encoding operator −iσy = |1⟩⟨0| − |0⟩⟨1|.
Unitary minus_i_sigma_y();

/// Pauli-Z measurement projectors {|0⟩⟨0|, |1⟩⟨1|}.
std::vector<Matrix> z_basis_projectors();

Complex inner_product(const StateVector &a, const StateVector &b);

/// Applies `op` to the ordered target qubits. targets[0] is the most
/// significant qubit of op's local index.
StateVector apply_unitary(const StateVector &state, std::span<const std::size_t> targets, const Unitary &op);
StateVector apply_unitary(const StateVector &state, std::initializer_list<std::size_t> targets, const Unitary &op);

/// Applies the 2×2 `op` to `target` on exactly the basis components where
/// every control qubit is 1. At least one control is required.
StateVector apply_controlled(const StateVector &state, std::span<const std::size_t> controls, std::size_t target,
                             const Unitary &op);
StateVector apply_controlled(const StateVector &state, std::initializer_list<std::size_t> controls,
                             std::size_t target, const Unitary &op);

/// Kronecker product; a's qubits come first (more significant).
StateVector tensor(const StateVector &a, const StateVector &b);

struct MeasurementResult {
  std::size_t outcome;
  StateVector collapsed;
  double probability;
};

/// Projective measurement by Born rule. `projectors` act on the ordered
/// `targets` (dimension 2^|targets|), must be Hermitian, idempotent,
/// pairwise orthogonal and complete within kInvariantTol. Consumes exactly
/// one uniform draw from `rng` regardless of the outcome distribution.
MeasurementResult measure_projective(const StateVector &state, std::span<const std::size_t> targets,
                                     std::span<const Matrix> projectors, Rng &rng);
/// Full-register variant: projectors act on the whole state.
MeasurementResult measure_projective(const StateVector &state, std::span<const Matrix> projectors, Rng &rng);

/// Born probabilities ‖P_k ψ‖² for each projector, without sampling.
std::vector<double> outcome_probabilities(const StateVector &state, std::span<const std::size_t> targets,
                                          std::span<const Matrix> projectors);

/// Reduced density matrix over `keep` (ordered; keep[0] is most significant).
DensityMatrix partial_trace(const StateVector &state, std::span<const std::size_t> keep);
DensityMatrix partial_trace(const StateVector &state, std::initializer_list<std::size_t> keep);

DensityMatrix pure_density(const StateVector &state);

/// True iff |⟨a|b⟩| ≥ 1 − tol, i.e. equal up to a global phase.
bool global_phase_equal(const StateVector &a, const StateVector &b, double tol = kIdentityTol);

/// Projector |v⟩⟨v| onto a (unit) vector.
Matrix outer_projector(const StateVector &v);

}  // namespace qss
