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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qss/angle.hpp"
#include "qss/linalg.hpp"
#include "qss/protocol.hpp"
#include "qss/rng.hpp"
#include "qss/state.hpp"

namespace qss {

/// Parameters of an entangling attack
///
///   E(|in⟩_A ⊗ |χ⟩_S) = α|ε⟩_A|χ⟩_S + β|ε⊥⟩_A Û(θ′)|χ⟩_S
///
/// for every photon state χ. `prepared` is the ancilla state |in⟩ the
/// attacker feeds in; it defaults to |ε⟩. The controlled-controlled-(−iσy)
/// attack is the member with a two-qubit ancilla whose prepared state differs
/// from |ε⟩ (see qgwz_spec).
struct EntanglerSpec {
  std::size_t ancilla_dim = 2;
  StateVector epsilon = StateVector::basis(1, 0);
  StateVector epsilon_perp = StateVector::basis(1, 1);
  std::optional<StateVector> prepared;
  Complex alpha = 1.0;
  Complex beta = 0.0;
  RotationAngle theta_prime;

  std::size_t ancilla_qubits() const;
  const StateVector &input_state() const { return prepared ? *prepared : epsilon; }
  /// Throws InvalidArgument on: ancilla_dim not a power of two ≥ 2, ancilla
  /// state of the wrong width, |α|²+|β|² ≠ 1 or ⟨ε|ε⊥⟩ ≠ 0 (within 1e-10).
  void validate() const;
};

/// Which leftover standard-basis vectors Gram–Schmidt visits first when
/// extending E from its defining subspace to the whole register.
enum class CompletionOrder { Forward, Reverse };

/// Unitary on ancilla ⊗ photon (ancilla qubits first, photon last;
/// dimension 2·ancilla_dim) with the action documented on EntanglerSpec on
/// |prepared⟩ ⊗ C². The rest of the space is filled in by Gram–Schmidt over
/// the standard basis, visited in `order`.
Unitary build_entangler(const EntanglerSpec &spec, CompletionOrder order = CompletionOrder::Forward);

/// A built entangler with its inverse and the attacker's ancilla projectors.
class Entangler {
 public:
  explicit Entangler(EntanglerSpec spec, CompletionOrder order = CompletionOrder::Forward);

  const EntanglerSpec &spec() const { return spec_; }
  const Unitary &forward() const { return forward_; }
  const Unitary &inverse() const { return inverse_; }
  std::size_t num_qubits() const { return spec_.ancilla_qubits() + 1; }
  std::vector<std::size_t> ancilla_qubits() const;
  std::size_t photon_qubit() const { return spec_.ancilla_qubits(); }

  /// E(|prepared⟩ ⊗ photon) for a single-qubit photon.
  StateVector entangle(const StateVector &photon) const;
  /// {P_ε, P_ε⊥, I − P_ε − P_ε⊥} on the ancilla.
  const std::vector<Matrix> &ancilla_projectors() const { return projectors_; }

 private:
  EntanglerSpec spec_;
  Unitary forward_;
  Unitary inverse_;
  std::vector<Matrix> projectors_;
};

/// The controlled-controlled-(−iσy) attack as a family member: ε = the
/// normalized non-|11⟩ part of the prepared two-qubit ancilla (|00⟩ if
/// that part vanishes), ε⊥ = |11⟩, α = its norm, β = the |11⟩ amplitude,
/// θ′ = −3π/2 (stored as π/2).
EntanglerSpec qgwz_spec(const StateVector &ancilla_two_qubit_state);

/// Random valid spec with ancilla_dim d: Gaussian ε, ε⊥ orthonormalized
/// against it, random |α|² and phases, uniform θ′. prepared = ε.
EntanglerSpec random_entangler_spec(Rng &rng, std::size_t ancilla_dim);
/// Gaussian random unit state.
StateVector random_state(Rng &rng, std::size_t num_qubits);

enum class AncillaOutcome { Epsilon = 0, EpsilonPerp = 1 };

struct CheckResponse {
  RotationAngle announced;
  AncillaOutcome outcome;
  StateVector collapsed;
};

/// Measures the ancilla of `joint` in {ε, ε⊥, rest} and announces θc on ε,
/// θc + θ′ on ε⊥. Throws InvariantViolation if the "rest" outcome has
/// probability above 1e-12.
CheckResponse respond_to_check(const StateVector &joint, RotationAngle honest_angle, const Entangler &entangler,
                               Rng &rng);

/// Applies E⁻¹ = E†.
StateVector disentangle(const StateVector &joint, const Entangler &entangler);

/// Maps an ancilla outcome to a bit guess.
struct GuessRule {
  int on_epsilon = 0;
  int on_epsilon_perp = 1;

  int operator()(AncillaOutcome o) const { return o == AncillaOutcome::Epsilon ? on_epsilon : on_epsilon_perp; }
  bool operator==(const GuessRule &) const = default;

  /// "default", "inverted", "always0", "always1".
  static std::optional<GuessRule> named(const std::string &name);
  std::string name() const;
};

struct GuessResult {
  Bits guesses;
  std::vector<AncillaOutcome> outcomes;
  /// Born probability of ε for each photon.
  std::vector<double> epsilon_probabilities;
};

/// Measures the ancilla of each joint state in {ε, ε⊥, rest} and maps the
/// outcome through `rule`.
GuessResult guess_bits(std::span<const StateVector> joints, const Entangler &entangler, const GuessRule &rule,
                       Rng &rng);

/// The corrected mid-attack state of the controlled-controlled-(−iσy)
/// attack and its bit-1 counterpart (S qubit first, then H, T).
struct QgwzFixture {
  StateVector state_bit0;
  StateVector state_bit1;
  StateVector ht_factor0;  // extracted by contracting out the S factor
  StateVector ht_factor1;
};
QgwzFixture qgwz_fixture(RotationAngle theta);

enum class AnnouncementMode {
  /// Measure the ancilla, then announce θc or θc + θ′.
  Adaptive,
  /// Always announce θc (control case; gets caught).
  Naive,
};

/// The entangling attack as a protocol adversary. Entangles each photon on
/// the last-agent → Alice hop, answers check requests for the hooked agent,
/// disentangles on the Alice → last-agent hop and guesses at the end.
class EntanglingAdversary : public AdversaryHook {
 public:
  EntanglingAdversary(EntanglerSpec spec, GuessRule rule = {}, AnnouncementMode mode = AnnouncementMode::Adaptive,
                      CompletionOrder order = CompletionOrder::Forward);

  void on_start(std::uint64_t stream_seed) override;
  StateVector on_photon_forward(const Hop &hop, std::size_t photon, StateVector state) override;
  RotationAngle on_check_announcement(PhotonRecord &photon, RotationAngle honest_angle) override;
  StateVector on_photon_return(const Hop &hop, std::size_t photon, StateVector state) override;
  std::optional<Bits> on_finish(std::span<const PhotonRecord> message_photons) override;

  const Entangler &entangler() const { return entangler_; }
  const std::map<std::size_t, AncillaOutcome> &check_outcomes() const { return check_outcomes_; }
  const std::optional<GuessResult> &last_guess() const { return last_guess_; }

 private:
  Entangler entangler_;
  GuessRule rule_;
  AnnouncementMode mode_;
  Rng rng_{0};
  std::map<std::size_t, AncillaOutcome> check_outcomes_;
  std::optional<GuessResult> last_guess_;
};

}  // namespace qss
