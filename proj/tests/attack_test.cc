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

#include "qss/attack.hpp"
#include "qss/error.hpp"
#include "test_util.h"

using namespace qss;
using namespace qss_test;

namespace {

StateVector photon_at(double theta) { return StateVector(1, {std::cos(theta), std::sin(theta)}); }

// α|ε⟩|χ⟩ + β|ε⊥⟩Û(θ′)|χ⟩, assembled directly from the definition.
StateVector defining_image(const EntanglerSpec &spec, const StateVector &chi) {
  const StateVector shifted = apply_unitary(chi, {0}, rotation_operator(spec.theta_prime));
  const StateVector a = tensor(spec.epsilon, chi);
  const StateVector b = tensor(spec.epsilon_perp, shifted);
  std::vector<Complex> out(a.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = spec.alpha * a[i] + spec.beta * b[i];
  return StateVector(a.num_qubits(), out);
}

}  // namespace

TEST(EntanglerSpec, validate) {
  EntanglerSpec s;
  EXPECT_NO_THROW(s.validate());
  s.beta = 0.5;
  EXPECT_THROW(s.validate(), InvalidArgument);
  s = {};
  s.epsilon_perp = StateVector::normalized(1, {1, 1});
  EXPECT_THROW(s.validate(), InvalidArgument);
  s = {};
  s.ancilla_dim = 3;
  EXPECT_THROW(s.validate(), InvalidArgument);
  s = {};
  s.ancilla_dim = 4;
  EXPECT_THROW(s.validate(), InvalidArgument);
}

TEST(Entangler, defining_action) {
  Rng rng(21);
  for (std::size_t d : {2u, 4u, 8u}) {
    for (int i = 0; i < 10; ++i) {
      const EntanglerSpec spec = random_entangler_spec(rng, d);
      const Entangler e(spec);
      for (int t = 0; t < 5; ++t) {
        const StateVector chi = random_state(rng, 1);
        EXPECT_LT(max_diff(e.entangle(chi), defining_image(spec, chi)), 1e-12);
      }
    }
  }
}

TEST(Entangler, completion_order_does_not_matter) {
  Rng rng(8);
  for (std::size_t d : {2u, 4u}) {
    const EntanglerSpec spec = random_entangler_spec(rng, d);
    const Entangler fwd(spec, CompletionOrder::Forward);
    const Entangler rev(spec, CompletionOrder::Reverse);
    const StateVector chi = random_state(rng, 1);
    EXPECT_LT(max_diff(fwd.entangle(chi), rev.entangle(chi)), 1e-12);
    Rng r1(3), r2(3);
    const auto a = respond_to_check(fwd.entangle(chi), RotationAngle(0.5), fwd, r1);
    const auto b = respond_to_check(rev.entangle(chi), RotationAngle(0.5), rev, r2);
    EXPECT_EQ(a.outcome, b.outcome);
    EXPECT_EQ(a.announced, b.announced);
    EXPECT_LT(max_diff(a.collapsed, b.collapsed), 1e-12);
    const StateVector enc_f = apply_unitary(fwd.entangle(chi), {fwd.photon_qubit()}, minus_i_sigma_y());
    const StateVector enc_r = apply_unitary(rev.entangle(chi), {rev.photon_qubit()}, minus_i_sigma_y());
    EXPECT_LT(max_diff(disentangle(enc_f, fwd), disentangle(enc_r, rev)), 1e-12);
  }
}

TEST(Entangler, inverse_round_trip) {
  Rng rng(13);
  const EntanglerSpec spec = random_entangler_spec(rng, 4);
  const Entangler e(spec);
  const StateVector chi = random_state(rng, 1);
  EXPECT_LT(max_diff(disentangle(e.entangle(chi), e), tensor(spec.input_state(), chi)), 1e-12);
  // Encoding commutes through: E⁻¹ (I⊗Y) E (ε⊗χ) = ε ⊗ Yχ.
  const StateVector encoded = apply_unitary(e.entangle(chi), {e.photon_qubit()}, minus_i_sigma_y());
  EXPECT_LT(max_diff(disentangle(encoded, e), tensor(spec.epsilon, apply_unitary(chi, {0}, minus_i_sigma_y()))),
            1e-12);
}

// Reduced ancilla of α|0⟩|χ⟩ + β|1⟩Û(θ′)|χ⟩ for real χ: coherence αβ* cosθ′.
TEST(Entangler, ancilla_coherence_follows_cos_theta_prime) {
  for (double tp : {0.0, 0.4, 1.3, std::numbers::pi / 2, 2.9}) {
    EntanglerSpec spec;
    spec.alpha = std::sqrt(0.3);
    spec.beta = std::polar(std::sqrt(0.7), 0.6);
    spec.theta_prime = RotationAngle(tp);
    const Entangler e(spec);
    const DensityMatrix rho = partial_trace(e.entangle(photon_at(1.1)), {0});
    EXPECT_NEAR(std::abs(rho(0, 1) - spec.alpha * std::conj(spec.beta) * std::cos(tp)), 0.0, 1e-12);
    EXPECT_NEAR(rho(0, 0).real(), 0.3, 1e-12);
  }
}

TEST(Qgwz, spec_from_ancilla) {
  const StateVector a = StateVector::normalized(2, {1, 1, 1, 1});
  const EntanglerSpec spec = qgwz_spec(a);
  EXPECT_EQ(spec.ancilla_dim, 4u);
  EXPECT_NEAR(std::abs(spec.alpha), std::sqrt(0.75), 1e-15);
  EXPECT_NEAR(std::abs(spec.beta), 0.5, 1e-15);
  EXPECT_EQ(spec.epsilon_perp, StateVector::basis(2, 3));
  EXPECT_NEAR(spec.theta_prime.radians(), std::numbers::pi / 2, 1e-15);
  EXPECT_EQ(spec.input_state(), a);
  EXPECT_THROW(qgwz_spec(StateVector::basis(1, 0)), InvalidArgument);
  // Degenerate ancillas.
  EXPECT_EQ(qgwz_spec(StateVector::basis(2, 3)).epsilon, StateVector::basis(2, 0));
  EXPECT_NEAR(std::abs(qgwz_spec(StateVector::basis(2, 1)).beta), 0.0, 0.0);
}

TEST(Qgwz, matches_controlled_controlled_flip) {
  Rng rng(31);
  for (int i = 0; i < 50; ++i) {
    const StateVector a = random_state(rng, 2);
    const StateVector chi = random_state(rng, 1);
    const Entangler e(qgwz_spec(a));
    EXPECT_LT(max_diff(e.entangle(chi), apply_controlled(tensor(a, chi), {0, 1}, 2, minus_i_sigma_y())), 1e-12);
  }
}

TEST(Qgwz, fixture_overlap) {
  for (int k = 0; k < 12; ++k) {
    const auto f = qgwz_fixture(RotationAngle(0.5 * k));
    EXPECT_NEAR(std::abs(inner_product(f.ht_factor0, f.ht_factor1)), 1.0, 1e-12);
    EXPECT_NEAR(f.ht_factor0.norm(), 1.0, 1e-12);
    // The bit lives entirely in the S factor, which flips to an orthogonal state.
    EXPECT_NEAR(std::abs(inner_product(f.state_bit0, f.state_bit1)), 0.0, 1e-12);
  }
}

TEST(RespondToCheck, announcement_undoes_the_branch) {
  Rng rng(17);
  const EntanglerSpec spec = random_entangler_spec(rng, 2);
  const Entangler e(spec);
  for (int i = 0; i < 50; ++i) {
    const double total = kTwoPi * rng.uniform();
    const double honest = kTwoPi * rng.uniform();
    const auto r = respond_to_check(e.entangle(photon_at(total)), RotationAngle(honest), e, rng);
    const double expected =
        r.outcome == AncillaOutcome::Epsilon ? honest : honest + spec.theta_prime.radians();
    EXPECT_EQ(r.announced, RotationAngle(expected));
    // Alice undoes the announced total and must see |0⟩ with certainty.
    const RotationAngle shift = r.announced - RotationAngle(honest);
    const StateVector undone =
        apply_unitary(r.collapsed, {e.photon_qubit()}, rotation_operator(-(RotationAngle(total) + shift)));
    const auto p = outcome_probabilities(undone, std::vector<std::size_t>{e.photon_qubit()}, z_basis_projectors());
    EXPECT_NEAR(p[0], 1.0, 1e-12);
  }
}

TEST(RespondToCheck, epsilon_frequency) {
  EntanglerSpec spec;
  spec.alpha = std::sqrt(0.35);
  spec.beta = Complex(0, std::sqrt(0.65));
  spec.theta_prime = RotationAngle(1.0);
  const Entangler e(spec);
  const StateVector joint = e.entangle(photon_at(0.3));
  Rng rng(55);
  const int n = 100000;
  int eps = 0;
  for (int i = 0; i < n; ++i) eps += respond_to_check(joint, RotationAngle(0.0), e, rng).outcome == AncillaOutcome::Epsilon;
  EXPECT_LE(std::fabs(static_cast<double>(eps) / n - 0.35), 4 * std::sqrt(0.35 * 0.65 / n));
}

TEST(RespondToCheck, rejects_leaked_support) {
  EntanglerSpec spec;
  spec.ancilla_dim = 4;
  spec.epsilon = StateVector::basis(2, 0);
  spec.epsilon_perp = StateVector::basis(2, 1);
  const Entangler e(spec);
  Rng rng(1);
  const StateVector outside = tensor(StateVector::basis(2, 2), StateVector::basis(1, 0));
  EXPECT_THROW(respond_to_check(outside, RotationAngle(0.0), e, rng), InvariantViolation);
}

TEST(GuessRule, names) {
  for (const char *n : {"default", "inverted", "always0", "always1"}) EXPECT_EQ(GuessRule::named(n)->name(), n);
  EXPECT_FALSE(GuessRule::named("bogus").has_value());
  const GuessRule inv = *GuessRule::named("inverted");
  EXPECT_EQ(inv(AncillaOutcome::Epsilon), 1);
  EXPECT_EQ(inv(AncillaOutcome::EpsilonPerp), 0);
}

TEST(GuessBits, epsilon_probability_after_disentangle_is_bit_independent) {
  Rng rng(6);
  const StateVector a = random_state(rng, 2);
  const Entangler e(qgwz_spec(a));
  const double alpha2 = std::norm(e.spec().alpha);
  for (int bit = 0; bit < 2; ++bit) {
    StateVector joint = e.entangle(photon_at(0.8));
    if (bit) joint = apply_unitary(joint, {e.photon_qubit()}, minus_i_sigma_y());
    const std::vector<StateVector> joints{disentangle(joint, e)};
    const auto g = guess_bits(joints, e, GuessRule{}, rng);
    EXPECT_NEAR(g.epsilon_probabilities[0], alpha2, 1e-12);
  }
}

TEST(EntanglingAdversary, escapes_detection_in_protocol) {
  Rng rng(44);
  for (int i = 0; i < 10; ++i) {
    EntanglingAdversary adv(random_entangler_spec(rng, 2));
    ProtocolConfig c;
    c.seed = 1000 + i;
    c.num_second_detection_checks = 4;
    const auto out = run_protocol(c, &adv);
    EXPECT_TRUE(out.first_detection_pass);
    EXPECT_TRUE(out.second_detection_pass);
    EXPECT_EQ(out.decoded, out.sent);
    for (double p : out.first_detection_pass_probabilities) EXPECT_NEAR(p, 1.0, 1e-10);
    ASSERT_TRUE(out.guesses.has_value());
    EXPECT_EQ(out.guesses->size(), out.sent.size());
    EXPECT_EQ(adv.check_outcomes().size(), c.first_check_count());
  }
}

// Control: announcing θc regardless passes each check with 1 − |β|²sin²θ′.
TEST(EntanglingAdversary, naive_pass_probability_is_exact) {
  EntanglerSpec spec;
  spec.alpha = std::sqrt(0.4);
  spec.beta = std::sqrt(0.6);
  spec.theta_prime = RotationAngle(1.2);
  EntanglingAdversary adv(spec, {}, AnnouncementMode::Naive);
  ProtocolConfig c;
  c.seed = 5;
  const auto out = run_protocol(c, &adv);
  const double want = 1 - 0.6 * std::sin(1.2) * std::sin(1.2);
  ASSERT_FALSE(out.first_detection_pass_probabilities.empty());
  for (double p : out.first_detection_pass_probabilities) EXPECT_NEAR(p, want, 1e-12);
}
