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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qss/attack.hpp"
#include "qss/protocol.hpp"

namespace qss {

struct Distinguishability {
  double trace_distance = 0.0;
  /// Optimal success probability ½(1 + trace_distance).
  double helstrom = 0.5;
};

/// Exact, measurement-free pipeline: χ = Û(θ)|0⟩, entangle, encode bit m,
/// disentangle, reduce to the ancilla; compares m = 0 against m = 1.
Distinguishability indistinguishability(const Entangler &entangler, RotationAngle theta);
Distinguishability indistinguishability(const EntanglerSpec &spec, RotationAngle theta);

/// Diagnostic outside the attack model: skip disentangling and compare the
/// full ancilla+photon states for m = 0 and m = 1.
Distinguishability joint_state_distinguishability(const Entangler &entangler, RotationAngle theta);

/// Wilson score interval.
struct Interval {
  double low = 0.0;
  double high = 1.0;

  bool operator==(const Interval &) const = default;
};
Interval wilson_interval(std::size_t successes, std::size_t total, double z = 1.959963984540054);

struct AttackConfig {
  EntanglerSpec spec;
  GuessRule rule;
  AnnouncementMode mode = AnnouncementMode::Adaptive;
  std::string kind = "general";  // "qgwz" or "general"; echoed in reports
};

struct ScenarioReport {
  std::size_t trials = 0;
  /// Fraction of message bits guessed correctly; absent without an attack.
  std::optional<double> attacker_accuracy;
  std::optional<Interval> attacker_ci;
  double first_detection_pass_rate = 0.0;
  /// Fraction of message bits decoded correctly over runs that reached
  /// recovery (0 if none did).
  double recovery_accuracy = 0.0;
  double max_trace_distance = 0.0;
  /// ½(1 + max_trace_distance).
  double helstrom_bound = 0.5;
  std::uint64_t seed = 0;

  // Aggregates behind the rates.
  std::size_t first_detection_passes = 0;
  std::size_t second_detection_passes = 0;
  std::size_t decoded_trials = 0;
  std::size_t guessed_bits = 0;
  std::size_t correct_guesses = 0;
  std::size_t decoded_bits = 0;
  std::size_t correct_decodes = 0;
  std::size_t check_measurements = 0;
  std::size_t check_failures = 0;
  /// Smallest computed Born pass probability of any check photon.
  double min_check_pass_probability = 1.0;
  /// Largest deviation of a decode outcome probability from 1.
  double max_recovery_deviation = 0.0;

  bool operator==(const ScenarioReport &) const = default;
};

struct MonteCarloOptions {
  std::size_t trials = 1;
  /// 0 = hardware concurrency. Results do not depend on this.
  std::size_t threads = 1;
  bool keep_transcripts = false;
};

struct MonteCarloResult {
  ScenarioReport report;
  std::vector<Transcript> transcripts;  // filled when keep_transcripts
};

/// Runs independent seeded protocol executions; trial i uses seed
/// derive_seed(config.seed, i) and results are reduced in trial order.
MonteCarloResult monte_carlo(const ProtocolConfig &config, const std::optional<AttackConfig> &attack,
                             const MonteCarloOptions &options);

struct SweepGrid {
  std::vector<RotationAngle> theta_prime;
  std::vector<double> alpha_sq;
  std::vector<RotationAngle> theta;
  /// Supplies ancilla_dim, ε, ε⊥, prepared and the phases of α, β.
  EntanglerSpec spec_template;

  void validate() const;
  /// 5×5×5: θ′, θ ∈ {2πk/5}, |α|² ∈ {0, ¼, ½, ¾, 1}.
  static SweepGrid default_grid();
};

struct SweepRow {
  RotationAngle theta_prime;
  double alpha_sq = 0.0;
  RotationAngle theta;
  double trace_distance = 0.0;
  double helstrom = 0.5;
};

/// One row per grid point, θ′-major then |α|² then θ.
std::vector<SweepRow> sweep(const SweepGrid &grid);

}  // namespace qss
