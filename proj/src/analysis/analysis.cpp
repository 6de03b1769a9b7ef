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

#include "qss/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "qss/error.hpp"

namespace qss {

namespace {

StateVector photon_at(RotationAngle theta) {
  return StateVector(1, {std::cos(theta.radians()), std::sin(theta.radians())});
}

StateVector encode_bit(const StateVector &joint, std::size_t photon_qubit, int bit) {
  return bit ? apply_unitary(joint, {photon_qubit}, minus_i_sigma_y()) : joint;
}

Complex unit_phase(Complex z) {
  const double m = std::abs(z);
  return m > 0.0 ? z / m : Complex{1.0};
}

struct TrialSummary {
  bool first_pass = false;
  bool second_pass = false;
  bool decoded = false;
  std::size_t decoded_bits = 0;
  std::size_t correct_decodes = 0;
  std::size_t guessed_bits = 0;
  std::size_t correct_guesses = 0;
  std::size_t check_measurements = 0;
  std::size_t check_failures = 0;
  double min_check_pass_probability = 1.0;
  double max_recovery_deviation = 0.0;
  double max_trace_distance = 0.0;
  Transcript transcript;
};

TrialSummary run_trial(const ProtocolConfig &base, const std::optional<AttackConfig> &attack,
                       const Entangler *shared_entangler, std::size_t index, bool keep_transcript) {
  ProtocolConfig config = base;
  config.seed = derive_seed(base.seed, index);

  std::optional<EntanglingAdversary> adversary;
  if (attack) adversary.emplace(attack->spec, attack->rule, attack->mode);
  const ProtocolOutcome out = run_protocol(config, adversary ? &*adversary : nullptr);

  TrialSummary s;
  s.first_pass = out.first_detection_pass;
  s.second_pass = out.second_detection_pass;
  for (const auto &e : out.transcript.events()) {
    if (e.phase == Phase::FirstDetection && e.kind == EventKind::Measured) {
      ++s.check_measurements;
      s.check_failures += e.outcome.value_or(0) != 0;
    }
  }
  for (double p : out.first_detection_pass_probabilities) {
    s.min_check_pass_probability = std::min(s.min_check_pass_probability, p);
  }
  if (out.decoded) {
    s.decoded = true;
    s.decoded_bits = out.sent.size();
    for (std::size_t i = 0; i < out.sent.size(); ++i) s.correct_decodes += (*out.decoded)[i] == out.sent[i];
    for (double p : out.recovery_probabilities) {
      s.max_recovery_deviation = std::max(s.max_recovery_deviation, std::fabs(1.0 - p));
    }
  }
  if (out.guesses) {
    s.guessed_bits = out.guesses->size();
    for (std::size_t i = 0; i < out.guesses->size(); ++i) s.correct_guesses += (*out.guesses)[i] == out.sent[i];
  }
  if (shared_entangler) {
    for (const auto &theta : out.message_angles) {
      s.max_trace_distance =
          std::max(s.max_trace_distance, indistinguishability(*shared_entangler, theta).trace_distance);
    }
  }
  if (keep_transcript) s.transcript = out.transcript;
  return s;
}

}  // namespace

Distinguishability indistinguishability(const Entangler &entangler, RotationAngle theta) {
  const StateVector entangled = entangler.entangle(photon_at(theta));
  const auto ancilla = entangler.ancilla_qubits();
  std::vector<DensityMatrix> reduced;
  for (int bit = 0; bit < 2; ++bit) {
    const StateVector back = disentangle(encode_bit(entangled, entangler.photon_qubit(), bit), entangler);
    reduced.push_back(partial_trace(back, ancilla));
  }
  const double td = trace_distance(reduced[0], reduced[1]);
  return {td, 0.5 * (1.0 + td)};
}

Distinguishability indistinguishability(const EntanglerSpec &spec, RotationAngle theta) {
  return indistinguishability(Entangler(spec), theta);
}

Distinguishability joint_state_distinguishability(const Entangler &entangler, RotationAngle theta) {
  const StateVector entangled = entangler.entangle(photon_at(theta));
  const DensityMatrix rho0 = pure_density(entangled);
  const DensityMatrix rho1 = pure_density(encode_bit(entangled, entangler.photon_qubit(), 1));
  const double td = trace_distance(rho0, rho1);
  return {td, 0.5 * (1.0 + td)};
}

Interval wilson_interval(std::size_t successes, std::size_t total, double z) {
  if (total == 0) return {0.0, 1.0};
  const double n = static_cast<double>(total);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

MonteCarloResult monte_carlo(const ProtocolConfig &config, const std::optional<AttackConfig> &attack,
                             const MonteCarloOptions &options) {
  if (options.trials == 0) throw InvalidArgument("monte_carlo needs at least one trial");
  config.validate();
  std::optional<Entangler> shared;
  if (attack) shared.emplace(attack->spec);
  const Entangler *entangler = shared ? &*shared : nullptr;

  std::vector<TrialSummary> results(options.trials);
  std::vector<std::exception_ptr> errors(options.trials);
  std::size_t threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
  threads = std::min(threads, options.trials);

  auto work = [&](std::size_t worker) {
    for (std::size_t i = worker; i < options.trials; i += threads) {
      try {
        results[i] = run_trial(config, attack, entangler, i, options.keep_transcripts);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto &t : pool) t.join();
  }
  for (const auto &e : errors)
    if (e) std::rethrow_exception(e);

  MonteCarloResult out;
  ScenarioReport &r = out.report;
  r.trials = options.trials;
  r.seed = config.seed;
  for (auto &s : results) {
    r.first_detection_passes += s.first_pass;
    r.second_detection_passes += s.second_pass;
    r.decoded_trials += s.decoded;
    r.decoded_bits += s.decoded_bits;
    r.correct_decodes += s.correct_decodes;
    r.guessed_bits += s.guessed_bits;
    r.correct_guesses += s.correct_guesses;
    r.check_measurements += s.check_measurements;
    r.check_failures += s.check_failures;
    r.min_check_pass_probability = std::min(r.min_check_pass_probability, s.min_check_pass_probability);
    r.max_recovery_deviation = std::max(r.max_recovery_deviation, s.max_recovery_deviation);
    r.max_trace_distance = std::max(r.max_trace_distance, s.max_trace_distance);
    if (options.keep_transcripts) out.transcripts.push_back(std::move(s.transcript));
  }
  const auto n = static_cast<double>(r.trials);
  r.first_detection_pass_rate = static_cast<double>(r.first_detection_passes) / n;
  r.recovery_accuracy =
      r.decoded_bits ? static_cast<double>(r.correct_decodes) / static_cast<double>(r.decoded_bits) : 0.0;
  if (attack && r.guessed_bits > 0) {
    r.attacker_accuracy = static_cast<double>(r.correct_guesses) / static_cast<double>(r.guessed_bits);
    r.attacker_ci = wilson_interval(r.correct_guesses, r.guessed_bits);
  }
  r.helstrom_bound = 0.5 * (1.0 + r.max_trace_distance);
  return out;
}

void SweepGrid::validate() const {
  if (theta_prime.empty() || alpha_sq.empty() || theta.empty()) throw InvalidArgument("sweep grid has an empty axis");
  for (double a : alpha_sq) {
    if (!(a >= 0.0 && a <= 1.0)) throw InvalidArgument("sweep |alpha|^2 values must lie in [0, 1]");
  }
}

SweepGrid SweepGrid::default_grid() {
  SweepGrid g;
  for (int k = 0; k < 5; ++k) {
    g.theta_prime.emplace_back(kTwoPi * k / 5.0);
    g.theta.emplace_back(kTwoPi * k / 5.0);
    g.alpha_sq.push_back(0.25 * k);
  }
  return g;
}

std::vector<SweepRow> sweep(const SweepGrid &grid) {
  grid.validate();
  const Complex alpha_phase = unit_phase(grid.spec_template.alpha);
  const Complex beta_phase = unit_phase(grid.spec_template.beta);
  std::vector<SweepRow> rows;
  rows.reserve(grid.theta_prime.size() * grid.alpha_sq.size() * grid.theta.size());
  for (const auto &tp : grid.theta_prime) {
    for (double a2 : grid.alpha_sq) {
      EntanglerSpec spec = grid.spec_template;
      spec.theta_prime = tp;
      spec.alpha = std::sqrt(a2) * alpha_phase;
      spec.beta = std::sqrt(1.0 - a2) * beta_phase;
      const Entangler entangler(spec);
      for (const auto &theta : grid.theta) {
        const auto d = indistinguishability(entangler, theta);
        rows.push_back({tp, a2, theta, d.trace_distance, d.helstrom});
      }
    }
  }
  return rows;
}

}  // namespace qss
