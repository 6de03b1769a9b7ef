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

#include "qss/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qss/error.hpp"

namespace qss {

namespace {

std::size_t bit_of(std::size_t num_qubits, std::size_t qubit) { return std::size_t{1} << (num_qubits - 1 - qubit); }

void check_targets(const StateVector &state, std::span<const std::size_t> targets, const char *what) {
  if (targets.empty()) throw InvalidArgument(std::string(what) + ": no target qubits");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] >= state.num_qubits()) {
      throw InvalidArgument(std::string(what) + ": qubit " + std::to_string(targets[i]) + " out of range for " +
                            std::to_string(state.num_qubits()) + "-qubit state");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (targets[i] == targets[j]) {
        throw InvalidArgument(std::string(what) + ": duplicate qubit " + std::to_string(targets[i]));
      }
    }
  }
}

// Applies an arbitrary (not necessarily unitary) operator to the targets.
std::vector<Complex> apply_operator(std::span<const Complex> amps, std::size_t num_qubits,
                                    std::span<const std::size_t> targets, const Matrix &op) {
  const std::size_t k = targets.size();
  const std::size_t local_dim = std::size_t{1} << k;
  if (op.dim() != local_dim) {
    throw DimensionError("operator of dim " + std::to_string(op.dim()) + " applied to " + std::to_string(k) +
                         " qubit(s)");
  }
  std::vector<std::size_t> masks(k);
  std::size_t target_mask = 0;
  for (std::size_t i = 0; i < k; ++i) {
    masks[i] = bit_of(num_qubits, targets[i]);
    target_mask |= masks[i];
  }
  // offsets[l] is the global bit pattern of local index l (targets[0] = msb).
  std::vector<std::size_t> offsets(local_dim, 0);
  for (std::size_t l = 0; l < local_dim; ++l)
    for (std::size_t i = 0; i < k; ++i)
      if (l & (std::size_t{1} << (k - 1 - i))) offsets[l] |= masks[i];

  std::vector<Complex> out(amps.size());
  std::vector<Complex> local(local_dim);
  for (std::size_t base = 0; base < amps.size(); ++base) {
    if (base & target_mask) continue;
    for (std::size_t l = 0; l < local_dim; ++l) local[l] = amps[base | offsets[l]];
    for (std::size_t r = 0; r < local_dim; ++r) {
      Complex acc = 0.0;
      for (std::size_t c = 0; c < local_dim; ++c) acc += op(r, c) * local[c];
      out[base | offsets[r]] = acc;
    }
  }
  return out;
}

double squared_norm(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto &z : v) s += std::norm(z);
  return s;
}

void check_projectors(std::span<const Matrix> projectors, std::size_t dim) {
  if (projectors.empty()) throw InvalidArgument("measurement needs at least one projector");
  Matrix sum(dim);
  for (std::size_t i = 0; i < projectors.size(); ++i) {
    const Matrix &p = projectors[i];
    if (p.dim() != dim) throw DimensionError("projector dimension does not match measured subsystem");
    if (!p.is_hermitian(kInvariantTol)) throw InvalidArgument("projector " + std::to_string(i) + " is not Hermitian");
    if ((p * p).max_abs_diff(p) > kInvariantTol) {
      throw InvalidArgument("projector " + std::to_string(i) + " is not idempotent");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if ((p * projectors[j]).max_abs_diff(Matrix(dim)) > kInvariantTol) {
        throw InvalidArgument("projectors " + std::to_string(j) + " and " + std::to_string(i) + " are not orthogonal");
      }
    }
    sum = sum + p;
  }
  if (sum.max_abs_diff(Matrix::identity(dim)) > kInvariantTol) {
    throw InvalidArgument("projector set is not complete (does not sum to identity)");
  }
}

std::vector<std::size_t> all_qubits(std::size_t n) {
  std::vector<std::size_t> q(n);
  std::iota(q.begin(), q.end(), std::size_t{0});
  return q;
}

}  // namespace

StateVector::StateVector(std::size_t num_qubits, std::vector<Complex> amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
  if (num_qubits_ == 0 || num_qubits_ > kMaxQubits) {
    throw InvalidArgument("state must have between 1 and " + std::to_string(kMaxQubits) + " qubits");
  }
  if (amplitudes_.size() != (std::size_t{1} << num_qubits_)) {
    throw DimensionError("state of " + std::to_string(num_qubits_) + " qubits needs " +
                         std::to_string(std::size_t{1} << num_qubits_) + " amplitudes, got " +
                         std::to_string(amplitudes_.size()));
  }
  for (const auto &z : amplitudes_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw InvariantViolation("non-finite amplitude");
  }
  if (std::fabs(squared_norm(amplitudes_) - 1.0) > kInvariantTol) {
    throw InvariantViolation("state is not normalized (|psi|^2 = " + std::to_string(squared_norm(amplitudes_)) + ")");
  }
}

StateVector StateVector::basis(std::size_t num_qubits, std::size_t index) {
  if (num_qubits == 0 || num_qubits > kMaxQubits) throw InvalidArgument("basis state qubit count out of range");
  std::vector<Complex> amps(std::size_t{1} << num_qubits);
  if (index >= amps.size()) throw InvalidArgument("basis index out of range");
  amps[index] = 1.0;
  return StateVector(num_qubits, std::move(amps));
}

StateVector StateVector::normalized(std::size_t num_qubits, std::vector<Complex> amplitudes) {
  const double n = std::sqrt(squared_norm(amplitudes));
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("cannot normalize a zero or non-finite vector");
  for (auto &z : amplitudes) z /= n;
  return StateVector(num_qubits, std::move(amplitudes));
}

double StateVector::norm() const { return std::sqrt(squared_norm(amplitudes_)); }

Unitary rotation_operator(RotationAngle theta) {
  const double c = std::cos(theta.radians());
  const double s = std::sin(theta.radians());
  return Unitary(Matrix{{c, -s}, {s, c}});
}

Unitary minus_i_sigma_y() { return Unitary(Matrix{{0.0, -1.0}, {1.0, 0.0}}); }

std::vector<Matrix> z_basis_projectors() { return {Matrix{{1.0, 0.0}, {0.0, 0.0}}, Matrix{{0.0, 0.0}, {0.0, 1.0}}}; }

Complex inner_product(const StateVector &a, const StateVector &b) {
  if (a.dim() != b.dim()) throw DimensionError("inner product of states with unequal dims");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

StateVector apply_unitary(const StateVector &state, std::span<const std::size_t> targets, const Unitary &op) {
  check_targets(state, targets, "apply_unitary");
  return StateVector(state.num_qubits(), apply_operator(state.amplitudes(), state.num_qubits(), targets, op.matrix()));
}

StateVector apply_unitary(const StateVector &state, std::initializer_list<std::size_t> targets, const Unitary &op) {
  const std::vector<std::size_t> t(targets);
  return apply_unitary(state, std::span<const std::size_t>(t), op);
}

StateVector apply_controlled(const StateVector &state, std::span<const std::size_t> controls, std::size_t target,
                             const Unitary &op) {
  if (controls.empty()) throw InvalidArgument("apply_controlled: no control qubits");
  if (op.dim() != 2) throw DimensionError("apply_controlled: target operator must be 2x2");
  std::vector<std::size_t> all(controls.begin(), controls.end());
  all.push_back(target);
  check_targets(state, all, "apply_controlled");

  const std::size_t n = state.num_qubits();
  std::size_t control_mask = 0;
  for (std::size_t c : controls) control_mask |= bit_of(n, c);
  const std::size_t tbit = bit_of(n, target);
  const Matrix &m = op.matrix();

  std::vector<Complex> out(state.amplitudes().begin(), state.amplitudes().end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if ((i & control_mask) != control_mask || (i & tbit)) continue;
    const Complex a0 = state[i];
    const Complex a1 = state[i | tbit];
    out[i] = m(0, 0) * a0 + m(0, 1) * a1;
    out[i | tbit] = m(1, 0) * a0 + m(1, 1) * a1;
  }
  return StateVector(n, std::move(out));
}

StateVector apply_controlled(const StateVector &state, std::initializer_list<std::size_t> controls,
                             std::size_t target, const Unitary &op) {
  const std::vector<std::size_t> c(controls);
  return apply_controlled(state, std::span<const std::size_t>(c), target, op);
}

StateVector tensor(const StateVector &a, const StateVector &b) {
  const std::size_t n = a.num_qubits() + b.num_qubits();
  if (n > kMaxQubits) throw InvalidArgument("tensor product exceeds the qubit limit");
  std::vector<Complex> amps(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) amps[i * b.dim() + j] = a[i] * b[j];
  return StateVector(n, std::move(amps));
}

std::vector<double> outcome_probabilities(const StateVector &state, std::span<const std::size_t> targets,
                                          std::span<const Matrix> projectors) {
  check_targets(state, targets, "measure_projective");
  check_projectors(projectors, std::size_t{1} << targets.size());
  std::vector<double> probs;
  probs.reserve(projectors.size());
  for (const auto &p : projectors) {
    probs.push_back(squared_norm(apply_operator(state.amplitudes(), state.num_qubits(), targets, p)));
  }
  return probs;
}

MeasurementResult measure_projective(const StateVector &state, std::span<const std::size_t> targets,
                                     std::span<const Matrix> projectors, Rng &rng) {
  check_targets(state, targets, "measure_projective");
  check_projectors(projectors, std::size_t{1} << targets.size());

  std::vector<std::vector<Complex>> branches;
  std::vector<double> probs;
  double total = 0.0;
  for (const auto &p : projectors) {
    branches.push_back(apply_operator(state.amplitudes(), state.num_qubits(), targets, p));
    probs.push_back(squared_norm(branches.back()));
    total += probs.back();
  }
  const double u = rng.uniform() * total;
  std::size_t outcome = projectors.size();
  double cumulative = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] <= 0.0) continue;
    cumulative += probs[k];
    outcome = k;
    if (u < cumulative) break;
  }
  if (outcome == projectors.size()) throw InvariantViolation("measurement with all-zero outcome probabilities");

  auto &amps = branches[outcome];
  const double scale = 1.0 / std::sqrt(probs[outcome]);
  for (auto &z : amps) z *= scale;
  return MeasurementResult{outcome, StateVector(state.num_qubits(), std::move(amps)), probs[outcome]};
}

MeasurementResult measure_projective(const StateVector &state, std::span<const Matrix> projectors, Rng &rng) {
  const auto q = all_qubits(state.num_qubits());
  return measure_projective(state, q, projectors, rng);
}

DensityMatrix partial_trace(const StateVector &state, std::span<const std::size_t> keep) {
  check_targets(state, keep, "partial_trace");
  const std::size_t n = state.num_qubits();
  const std::size_t k = keep.size();
  const std::size_t local_dim = std::size_t{1} << k;

  std::size_t keep_mask = 0;
  std::vector<std::size_t> offsets(local_dim, 0);
  for (std::size_t i = 0; i < k; ++i) keep_mask |= bit_of(n, keep[i]);
  for (std::size_t l = 0; l < local_dim; ++l)
    for (std::size_t i = 0; i < k; ++i)
      if (l & (std::size_t{1} << (k - 1 - i))) offsets[l] |= bit_of(n, keep[i]);

  Matrix rho(local_dim);
  for (std::size_t rest = 0; rest < state.dim(); ++rest) {
    if (rest & keep_mask) continue;
    for (std::size_t r = 0; r < local_dim; ++r) {
      const Complex ar = state[rest | offsets[r]];
      if (ar == Complex{}) continue;
      for (std::size_t c = 0; c < local_dim; ++c) rho(r, c) += ar * std::conj(state[rest | offsets[c]]);
    }
  }
  return DensityMatrix(std::move(rho));
}

DensityMatrix partial_trace(const StateVector &state, std::initializer_list<std::size_t> keep) {
  const std::vector<std::size_t> k(keep);
  return partial_trace(state, std::span<const std::size_t>(k));
}

DensityMatrix pure_density(const StateVector &state) { return DensityMatrix(outer_projector(state)); }

bool global_phase_equal(const StateVector &a, const StateVector &b, double tol) {
  return std::abs(inner_product(a, b)) >= 1.0 - tol;
}

Matrix outer_projector(const StateVector &v) {
  Matrix m(v.dim());
  for (std::size_t r = 0; r < v.dim(); ++r)
    for (std::size_t c = 0; c < v.dim(); ++c) m(r, c) = v[r] * std::conj(v[c]);
  return m;
}

}  // namespace qss
