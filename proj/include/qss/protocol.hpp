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
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qss/angle.hpp"
#include "qss/error.hpp"
#include "qss/rng.hpp"
#include "qss/state.hpp"
#include "qss/transcript.hpp"

namespace qss {

enum class PhotonRole { Unassigned, FirstCheck, Message, SecondCheck };

/// One photon of the sequence. `state` may be joint with qubits an
/// adversary has entangled in; the photon itself is always the LAST
/// (least significant) qubit of the register.
struct PhotonRecord {
  std::size_t id = 0;
  StateVector state = StateVector::basis(1, 0);
  PhotonRole role = PhotonRole::Unassigned;
  std::size_t position = 0;

  std::size_t photon_qubit() const { return state.num_qubits() - 1; }
  /// Throws InvariantViolation if a role was already assigned.
  void assign(PhotonRole r);
};

/// Secret angles, keyed by (agent, photon).
class AngleLedger {
 public:
  void record(std::size_t agent, std::size_t photon, RotationAngle angle);
  std::optional<RotationAngle> get(std::size_t agent, std::size_t photon) const;
  /// Σ over all agents' angles for a photon (mod 2π).
  RotationAngle sum(std::size_t photon) const;
  /// Copy with one agent's entries removed (that agent refuses to disclose).
  AngleLedger without_agent(std::size_t agent) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::pair<std::size_t, std::size_t>, RotationAngle> entries_;
};

using Bits = std::vector<int>;

enum class AngleDistribution { Continuous, Discrete };

struct ProtocolConfig {
  std::size_t num_agents = 3;
  /// Explicit message. When empty, `message_length` uniform random bits are
  /// drawn from the run's stream.
  std::optional<Bits> message;
  std::size_t message_length = 32;
  double check_fraction_first = 0.5;
  std::size_t num_second_detection_checks = 0;
  AngleDistribution angle_distribution = AngleDistribution::Continuous;
  std::uint64_t seed = 0;
  /// Agent whose announcements the adversary hook controls. Defaults to
  /// the middle agent, num_agents / 2.
  std::optional<std::size_t> adversary_position;
  /// Agents that refuse to disclose their angles during recovery.
  std::vector<std::size_t> withheld_agents;

  std::size_t message_bit_count() const { return message ? message->size() : message_length; }
  std::size_t adversary_agent() const { return adversary_position.value_or(num_agents / 2); }
  /// Photons needed so that ⌈f·n⌉ are checked first and the rest carry the
  /// message plus the second-detection checks.
  std::size_t sequence_length() const;
  std::size_t first_check_count() const;
  /// Throws InvalidArgument describing the first problem found.
  void validate() const;
};

/// One hop of the quantum channel.
struct Hop {
  PartyId from;
  PartyId to;
};

/// Interception points for a dishonest agent. The default implementation
/// of every callback is the identity, and a default-constructed hook
/// leaves a run observationally identical to running without one.
class AdversaryHook {
 public:
  virtual ~AdversaryHook() = default;

  /// Called once before the run with the adversary's private stream.
  virtual void on_start(std::uint64_t /*stream_seed*/) {}
  /// Every encryption-chain hop. May return a wider (joint) register as
  /// long as the photon stays the last qubit.
  virtual StateVector on_photon_forward(const Hop & /*hop*/, std::size_t /*photon*/, StateVector state) {
    return state;
  }
  /// The controlled agent's announcement for a first-detection check
  /// photon. May measure (and so collapse) the adversary's part of `photon`.
  virtual RotationAngle on_check_announcement(PhotonRecord & /*photon*/, RotationAngle honest_angle) {
    return honest_angle;
  }
  /// The Alice → last-agent delivery hop after encoding.
  virtual StateVector on_photon_return(const Hop & /*hop*/, std::size_t /*photon*/, StateVector state) {
    return state;
  }
  /// End of run. Receives the message photons (position order) in their
  /// final joint state; returns bit guesses, or nothing.
  virtual std::optional<Bits> on_finish(std::span<const PhotonRecord> /*message_photons*/) { return std::nullopt; }
};

/// Shared per-run plumbing: transcript, hook, and which agent is hooked.
struct Channel {
  Transcript &log;
  AdversaryHook *hook = nullptr;
  std::size_t adversary_agent = 0;
};

struct DetectionVerdict {
  bool pass = true;
  std::vector<std::size_t> failed_photons;
  std::vector<std::size_t> checked_photons;
  /// Born probability of outcome 0 for each checked photon, in check order.
  std::vector<double> pass_probabilities;
};

struct RecoveryResult {
  Bits message;       // Message-role photons, in position order
  Bits check_bits;    // SecondCheck-role photons, in position order
  std::vector<std::size_t> check_positions;
  /// Born probability of the observed outcome for each decoded photon.
  std::vector<double> outcome_probabilities;
};

struct SecondDetectionVerdict {
  bool pass = true;
  std::vector<std::size_t> mismatched_positions;
};

/// Thrown by recovery_phase when an agent's angles are missing.
class DecodeRefused : public Error {
 public:
  DecodeRefused(const std::string &what, std::size_t agent) : Error(what), agent_(agent) {}
  std::size_t agent() const { return agent_; }

 private:
  std::size_t agent_;
};

std::vector<PhotonRecord> prepare_sequence(std::size_t n, Transcript *log = nullptr);

/// Sends the sequence Alice → agent0 → … → agent(K‑1) → Alice; each agent
/// rotates every photon by a fresh secret angle. The hook sees every hop.
AngleLedger encryption_phase(std::vector<PhotonRecord> &photons, std::size_t num_agents,
                             AngleDistribution distribution, Rng &rng, Channel &channel);

/// Alice samples ⌈f·n⌉ photons, collects every agent's announced angle for
/// each, undoes the announced total and measures Z. Passes iff every
/// outcome is 0. Every sampled photon is measured even after a failure.
DetectionVerdict first_detection(std::vector<PhotonRecord> &photons, const AngleLedger &ledger,
                                 std::size_t num_agents, std::size_t check_count, Rng &rng, Channel &channel);

/// Splits the unchecked photons: `second_checks` random positions become
/// SecondCheck, the rest Message.
void assign_payload_roles(std::vector<PhotonRecord> &photons, std::size_t second_checks, Rng &rng);

/// Applies −iσy to each Message (resp. SecondCheck) photon whose bit is 1.
void encode_message(std::vector<PhotonRecord> &photons, std::span<const int> message,
                    std::span<const int> check_bits, Channel *channel = nullptr);

/// Delivers the encoded photons to the last agent (hook: on_photon_return),
/// collects every agent's disclosed angles, undoes them and measures Z.
/// Throws DecodeRefused if any agent's entry is missing.
RecoveryResult recovery_phase(std::vector<PhotonRecord> &photons, const AngleLedger &ledger, std::size_t num_agents,
                              Rng &rng, Channel &channel);

SecondDetectionVerdict second_detection(std::span<const int> decoded_checks,
                                        std::span<const std::size_t> check_positions,
                                        std::span<const int> expected_checks);

struct ProtocolOutcome {
  Transcript transcript;
  Bits sent;                    // Alice's message
  std::optional<Bits> decoded;  // absent if the run aborted before decoding
  std::optional<Bits> guesses;  // adversary's guesses, if any
  bool first_detection_pass = false;
  bool second_detection_pass = false;
  bool decode_refused = false;
  /// Σ ledger angle of each Message photon (position order).
  std::vector<RotationAngle> message_angles;
  std::vector<double> first_detection_pass_probabilities;
  std::vector<double> recovery_probabilities;
};

/// Runs all six phases in order. Deterministic in config.seed; the
/// adversary receives its own derived stream so that attaching a hook never
/// perturbs the honest parties' draws.
ProtocolOutcome run_protocol(const ProtocolConfig &config, AdversaryHook *adversary = nullptr);

}  // namespace qss
