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

#include "qss/attack.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "qss/error.hpp"

namespace qss {

namespace {

using Vec = std::vector<Complex>;

Complex dot(const Vec &a, const Vec &b) {
  Complex acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double vnorm(const Vec &a) { return std::sqrt(std::real(dot(a, a))); }

// Two passes of classical Gram-Schmidt against `basis`.
void orthogonalize(Vec &v, const std::vector<Vec> &basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto &b : basis) {
      const Complex c = dot(b, v);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
    }
  }
}

// Extends orthonormal `seed` vectors to a basis of C^dim, visiting
// standard basis vectors in the given order. A candidate is taken when its
// residual exceeds 1e-3; the residuals of all dim candidates sum to at
// least 1 while the basis is incomplete, so one always qualifies.
std::vector<Vec> complete_basis(std::vector<Vec> basis, std::size_t dim, CompletionOrder order) {
  for (std::size_t step = 0; step < dim && basis.size() < dim; ++step) {
    const std::size_t k = order == CompletionOrder::Forward ? step : dim - 1 - step;
    Vec v(dim);
    v[k] = 1.0;
    orthogonalize(v, basis);
    const double n = vnorm(v);
    if (n < 1e-3) continue;
    for (auto &z : v) z /= n;
    basis.push_back(std::move(v));
  }
  if (basis.size() != dim) throw InvariantViolation("basis completion failed");
  return basis;
}

Vec kron_vec(std::span<const Complex> a, std::span<const Complex> b) {
  Vec out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  return out;
}

Vec to_vec(const StateVector &s) { return Vec(s.amplitudes().begin(), s.amplitudes().end()); }

double gaussian(Rng &rng) {
  // Box-Muller; 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

}  // namespace

std::size_t EntanglerSpec::ancilla_qubits() const {
  return static_cast<std::size_t>(std::countr_zero(ancilla_dim));
}

void EntanglerSpec::validate() const {
  if (ancilla_dim < 2 || !std::has_single_bit(ancilla_dim)) {
    throw InvalidArgument("ancilla_dim must be a power of two >= 2");
  }
  if (ancilla_qubits() + 1 > kMaxQubits) throw InvalidArgument("ancilla_dim too large");
  const auto width_ok = [&](const StateVector &s) { return s.dim() == ancilla_dim; };
  if (!width_ok(epsilon) || !width_ok(epsilon_perp)) {
    throw InvalidArgument("epsilon / epsilon_perp must have ancilla_dim amplitudes");
  }
  if (prepared && !width_ok(*prepared)) throw InvalidArgument("prepared ancilla state must have ancilla_dim amplitudes");
  if (std::abs(inner_product(epsilon, epsilon_perp)) > kInvariantTol) {
    throw InvalidArgument("epsilon and epsilon_perp are not orthogonal");
  }
  if (std::fabs(std::norm(alpha) + std::norm(beta) - 1.0) > kInvariantTol) {
    throw InvalidArgument("|alpha|^2 + |beta|^2 must equal 1");
  }
}

Unitary build_entangler(const EntanglerSpec &spec, CompletionOrder order) {
  spec.validate();
  const std::size_t dim = 2 * spec.ancilla_dim;
  const Unitary shift = rotation_operator(spec.theta_prime);
  const Vec in = to_vec(spec.input_state());
  const Vec eps = to_vec(spec.epsilon);
  const Vec perp = to_vec(spec.epsilon_perp);

  std::vector<Vec> domain;
  std::vector<Vec> image;
  for (std::size_t b = 0; b < 2; ++b) {
    const Vec photon{b == 0 ? 1.0 : 0.0, b == 1 ? 1.0 : 0.0};
    const Vec shifted{shift.matrix()(0, b), shift.matrix()(1, b)};
    domain.push_back(kron_vec(in, photon));
    Vec v = kron_vec(eps, photon);
    const Vec w = kron_vec(perp, shifted);
    for (std::size_t i = 0; i < dim; ++i) v[i] = spec.alpha * v[i] + spec.beta * w[i];
    image.push_back(std::move(v));
  }
  domain = complete_basis(std::move(domain), dim, order);
  image = complete_basis(std::move(image), dim, order);

  Matrix e(dim);
  for (std::size_t k = 0; k < dim; ++k)
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c) e(r, c) += image[k][r] * std::conj(domain[k][c]);
  return Unitary(std::move(e));
}

Entangler::Entangler(EntanglerSpec spec, CompletionOrder order)
    : spec_(std::move(spec)), forward_(build_entangler(spec_, order)), inverse_(forward_.adjoint()) {
  const Matrix pe = outer_projector(spec_.epsilon);
  const Matrix pp = outer_projector(spec_.epsilon_perp);
  projectors_ = {pe, pp, Matrix::identity(spec_.ancilla_dim) - pe - pp};
}

std::vector<std::size_t> Entangler::ancilla_qubits() const {
  std::vector<std::size_t> q(spec_.ancilla_qubits());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = i;
  return q;
}

StateVector Entangler::entangle(const StateVector &photon) const {
  if (photon.num_qubits() != 1) throw InvalidArgument("entangle expects a single-qubit photon");
  const StateVector joint = tensor(spec_.input_state(), photon);
  std::vector<std::size_t> all(num_qubits());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return apply_unitary(joint, all, forward_);
}

EntanglerSpec qgwz_spec(const StateVector &ancilla) {
  if (ancilla.num_qubits() != 2) throw InvalidArgument("qgwz_spec expects a two-qubit ancilla state");
  std::vector<Complex> rest{ancilla[0], ancilla[1], ancilla[2], 0.0};
  const double alpha = std::sqrt(std::norm(rest[0]) + std::norm(rest[1]) + std::norm(rest[2]));

  EntanglerSpec spec;
  spec.ancilla_dim = 4;
  spec.epsilon = alpha > 0.0 ? StateVector::normalized(2, std::move(rest)) : StateVector::basis(2, 0);
  spec.epsilon_perp = StateVector::basis(2, 3);
  spec.prepared = ancilla;
  spec.alpha = alpha;
  spec.beta = ancilla[3];
  spec.theta_prime = RotationAngle(-1.5 * std::numbers::pi);
  spec.validate();
  return spec;
}

StateVector random_state(Rng &rng, std::size_t num_qubits) {
  std::vector<Complex> amps(std::size_t{1} << num_qubits);
  for (auto &z : amps) z = Complex(gaussian(rng), gaussian(rng));
  return StateVector::normalized(num_qubits, std::move(amps));
}

EntanglerSpec random_entangler_spec(Rng &rng, std::size_t ancilla_dim) {
  if (ancilla_dim < 2 || !std::has_single_bit(ancilla_dim)) throw InvalidArgument("ancilla_dim must be a power of two");
  const auto qubits = static_cast<std::size_t>(std::countr_zero(ancilla_dim));
  EntanglerSpec spec;
  spec.ancilla_dim = ancilla_dim;
  spec.epsilon = random_state(rng, qubits);

  Vec perp = to_vec(random_state(rng, qubits));
  orthogonalize(perp, {to_vec(spec.epsilon)});
  spec.epsilon_perp = StateVector::normalized(qubits, std::move(perp));

  const double a2 = rng.uniform();
  spec.alpha = std::polar(std::sqrt(a2), kTwoPi * rng.uniform());
  spec.beta = std::polar(std::sqrt(1.0 - a2), kTwoPi * rng.uniform());
  spec.theta_prime = RotationAngle(kTwoPi * rng.uniform());
  spec.validate();
  return spec;
}

CheckResponse respond_to_check(const StateVector &joint, RotationAngle honest_angle, const Entangler &entangler,
                               Rng &rng) {
  if (joint.num_qubits() != entangler.num_qubits()) throw DimensionError("joint state does not match the entangler");
  const auto targets = entangler.ancilla_qubits();
  const auto &projectors = entangler.ancilla_projectors();
  const auto probs = outcome_probabilities(joint, targets, projectors);
  if (probs[2] > kIdentityTol) {
    throw InvariantViolation("ancilla left the {epsilon, epsilon_perp} span (p = " + std::to_string(probs[2]) + ")");
  }
  // Measure only the two physical outcomes; the third carries no weight.
  const std::vector<Matrix> two_outcome{projectors[0], projectors[1] + projectors[2]};
  auto m = measure_projective(joint, targets, two_outcome, rng);
  if (m.outcome == 0) return {honest_angle, AncillaOutcome::Epsilon, std::move(m.collapsed)};
  return {honest_angle + entangler.spec().theta_prime, AncillaOutcome::EpsilonPerp, std::move(m.collapsed)};
}

StateVector disentangle(const StateVector &joint, const Entangler &entangler) {
  if (joint.num_qubits() != entangler.num_qubits()) throw DimensionError("joint state does not match the entangler");
  std::vector<std::size_t> all(joint.num_qubits());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return apply_unitary(joint, all, entangler.inverse());
}

std::optional<GuessRule> GuessRule::named(const std::string &name) {
  if (name == "default") return GuessRule{0, 1};
  if (name == "inverted") return GuessRule{1, 0};
  if (name == "always0") return GuessRule{0, 0};
  if (name == "always1") return GuessRule{1, 1};
  return std::nullopt;
}

std::string GuessRule::name() const {
  for (const char *n : {"default", "inverted", "always0", "always1"})
    if (*named(n) == *this) return n;
  return "custom";
}

GuessResult guess_bits(std::span<const StateVector> joints, const Entangler &entangler, const GuessRule &rule,
                       Rng &rng) {
  const auto targets = entangler.ancilla_qubits();
  const auto &projectors = entangler.ancilla_projectors();
  const std::vector<Matrix> two_outcome{projectors[0], projectors[1] + projectors[2]};
  GuessResult result;
  for (const auto &joint : joints) {
    if (joint.num_qubits() != entangler.num_qubits()) throw DimensionError("joint state does not match the entangler");
    result.epsilon_probabilities.push_back(outcome_probabilities(joint, targets, two_outcome)[0]);
    const auto m = measure_projective(joint, targets, two_outcome, rng);
    const auto outcome = m.outcome == 0 ? AncillaOutcome::Epsilon : AncillaOutcome::EpsilonPerp;
    result.outcomes.push_back(outcome);
    result.guesses.push_back(rule(outcome));
  }
  return result;
}

QgwzFixture qgwz_fixture(RotationAngle theta) {
  const double c = std::cos(theta.radians());
  const double s = std::sin(theta.radians());
  const StateVector s_bit0(1, {c, -s});
  const StateVector s_bit1 = apply_unitary(s_bit0, {0}, minus_i_sigma_y());
  // ½(|00⟩ + |11⟩ − |01⟩ + |10⟩), amplitudes in index order 00, 01, 10, 11.
  const StateVector ht(2, {0.5, -0.5, 0.5, 0.5});

  const StateVector state0 = tensor(s_bit0, ht);
  const StateVector state1 = tensor(s_bit1, ht);

  // (⟨s| ⊗ I)|Ψ⟩, where s is the known S factor of Ψ.
  const auto contract = [](const StateVector &psi, const StateVector &s_factor) {
    std::vector<Complex> out(4);
    for (std::size_t sb = 0; sb < 2; ++sb)
      for (std::size_t i = 0; i < 4; ++i) out[i] += std::conj(s_factor[sb]) * psi[sb * 4 + i];
    return StateVector(2, std::move(out));
  };
  return QgwzFixture{state0, state1, contract(state0, s_bit0), contract(state1, s_bit1)};
}

EntanglingAdversary::EntanglingAdversary(EntanglerSpec spec, GuessRule rule, AnnouncementMode mode,
                                         CompletionOrder order)
    : entangler_(std::move(spec), order), rule_(rule), mode_(mode) {}

void EntanglingAdversary::on_start(std::uint64_t stream_seed) {
  rng_ = Rng(stream_seed);
  check_outcomes_.clear();
  last_guess_.reset();
}

StateVector EntanglingAdversary::on_photon_forward(const Hop &hop, std::size_t /*photon*/, StateVector state) {
  // The sequence is captured on its way back to Alice, after every agent's
  // rotation has been applied.
  if (!hop.to.is_alice() || hop.from.is_alice()) return state;
  return entangler_.entangle(state);
}

RotationAngle EntanglingAdversary::on_check_announcement(PhotonRecord &photon, RotationAngle honest_angle) {
  if (mode_ == AnnouncementMode::Naive) return honest_angle;
  auto response = respond_to_check(photon.state, honest_angle, entangler_, rng_);
  photon.state = std::move(response.collapsed);
  check_outcomes_[photon.id] = response.outcome;
  return response.announced;
}

StateVector EntanglingAdversary::on_photon_return(const Hop & /*hop*/, std::size_t /*photon*/, StateVector state) {
  return disentangle(state, entangler_);
}

std::optional<Bits> EntanglingAdversary::on_finish(std::span<const PhotonRecord> message_photons) {
  std::vector<StateVector> joints;
  joints.reserve(message_photons.size());
  for (const auto &p : message_photons) joints.push_back(p.state);
  last_guess_ = guess_bits(joints, entangler_, rule_, rng_);
  return last_guess_->guesses;
}

}  // namespace qss
