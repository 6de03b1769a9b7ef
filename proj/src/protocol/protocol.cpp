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

#include "qss/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace qss {

namespace {

constexpr std::uint64_t kAdversaryStream = 0xad7e5a41;

Event make_event(Phase phase, EventKind kind, std::optional<PartyId> party, std::optional<std::size_t> photon) {
  Event e;
  e.phase = phase;
  e.kind = kind;
  e.party = party;
  e.photon = photon;
  return e;
}

RotationAngle draw_angle(AngleDistribution distribution, Rng &rng) {
  if (distribution == AngleDistribution::Discrete) {
    return RotationAngle(static_cast<double>(rng.uniform_index(4)) * (std::numbers::pi / 2.0));
  }
  return RotationAngle(rng.uniform() * kTwoPi);
}

void rotate_photon(PhotonRecord &p, RotationAngle angle) {
  p.state = apply_unitary(p.state, {p.photon_qubit()}, rotation_operator(angle));
}

void check_photon_register(const PhotonRecord &p) {
  if (p.state.num_qubits() < 1) throw InvariantViolation("photon register is empty");
}

// Partial Fisher-Yates: `count` distinct indices from [0, n), ascending.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count, Rng &rng) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.uniform_index(n - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  return idx;
}

struct ZResult {
  int outcome;
  double probability;
  double p0;
};

ZResult measure_photon_z(PhotonRecord &p, Rng &rng) {
  const std::vector<std::size_t> target{p.photon_qubit()};
  const auto projectors = z_basis_projectors();
  const auto probs = outcome_probabilities(p.state, target, projectors);
  auto m = measure_projective(p.state, target, projectors, rng);
  p.state = std::move(m.collapsed);
  return {static_cast<int>(m.outcome), m.probability, probs[0]};
}

void check_bits(std::span<const int> bits, const char *what) {
  for (int b : bits) {
    if (b != 0 && b != 1) throw InvalidArgument(std::string(what) + " contains a value other than 0/1");
  }
}

}  // namespace

void PhotonRecord::assign(PhotonRole r) {
  if (role != PhotonRole::Unassigned) {
    throw InvariantViolation("photon " + std::to_string(id) + " already has a role");
  }
  role = r;
}

void AngleLedger::record(std::size_t agent, std::size_t photon, RotationAngle angle) {
  entries_[{agent, photon}] = angle;
}

std::optional<RotationAngle> AngleLedger::get(std::size_t agent, std::size_t photon) const {
  auto it = entries_.find({agent, photon});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

RotationAngle AngleLedger::sum(std::size_t photon) const {
  RotationAngle total;
  for (const auto &[key, angle] : entries_)
    if (key.second == photon) total += angle;
  return total;
}

AngleLedger AngleLedger::without_agent(std::size_t agent) const {
  AngleLedger out;
  for (const auto &[key, angle] : entries_)
    if (key.first != agent) out.entries_.emplace(key, angle);
  return out;
}

std::size_t ProtocolConfig::first_check_count() const {
  const auto n = static_cast<double>(sequence_length());
  return static_cast<std::size_t>(std::ceil(check_fraction_first * n - 1e-9));
}

std::size_t ProtocolConfig::sequence_length() const {
  const std::size_t payload = message_bit_count() + num_second_detection_checks;
  // n − ⌈f·n⌉ grows by 0 or 1 per step, so the first n reaching the payload
  // size hits it exactly.
  for (std::size_t n = payload;; ++n) {
    const auto checks = static_cast<std::size_t>(std::ceil(check_fraction_first * static_cast<double>(n) - 1e-9));
    if (n - checks >= payload) return n;
  }
}

void ProtocolConfig::validate() const {
  if (num_agents < 2) throw InvalidArgument("protocol needs at least 2 agents");
  if (!(check_fraction_first > 0.0 && check_fraction_first < 1.0)) {
    throw InvalidArgument("check_fraction_first must lie in (0, 1)");
  }
  if (message) {
    if (message->empty()) throw InvalidArgument("message must contain at least one bit");
    check_bits(*message, "message");
  } else if (message_length == 0) {
    throw InvalidArgument("message_length must be at least 1");
  }
  if (message_bit_count() + num_second_detection_checks > (std::size_t{1} << 20)) {
    throw InvalidArgument("sequence too long");
  }
  if (adversary_agent() >= num_agents) throw InvalidArgument("adversary_position is not an agent index");
  for (std::size_t a : withheld_agents) {
    if (a >= num_agents) throw InvalidArgument("withheld agent " + std::to_string(a) + " does not exist");
  }
}

std::vector<PhotonRecord> prepare_sequence(std::size_t n, Transcript *log) {
  if (n == 0) throw InvalidArgument("prepare_sequence: need at least one photon");
  std::vector<PhotonRecord> photons(n);
  for (std::size_t i = 0; i < n; ++i) {
    photons[i].id = i;
    photons[i].position = i;
    if (log) log->append(make_event(Phase::Preparation, EventKind::Prepared, PartyId::alice(), i));
  }
  return photons;
}

AngleLedger encryption_phase(std::vector<PhotonRecord> &photons, std::size_t num_agents,
                             AngleDistribution distribution, Rng &rng, Channel &channel) {
  AngleLedger ledger;
  auto send = [&](PartyId from, PartyId to) {
    const Hop hop{from, to};
    for (auto &p : photons) {
      Event e = make_event(Phase::Encryption, EventKind::Sent, from, p.id);
      e.to = to;
      channel.log.append(std::move(e));
      if (channel.hook) {
        p.state = channel.hook->on_photon_forward(hop, p.id, std::move(p.state));
        check_photon_register(p);
      }
    }
  };

  PartyId previous = PartyId::alice();
  for (std::size_t k = 0; k < num_agents; ++k) {
    send(previous, PartyId::agent(k));
    for (auto &p : photons) {
      const RotationAngle angle = draw_angle(distribution, rng);
      ledger.record(k, p.id, angle);
      rotate_photon(p, angle);
      channel.log.append(make_event(Phase::Encryption, EventKind::Rotated, PartyId::agent(k), p.id));
    }
    previous = PartyId::agent(k);
  }
  send(previous, PartyId::alice());
  return ledger;
}

DetectionVerdict first_detection(std::vector<PhotonRecord> &photons, const AngleLedger &ledger,
                                 std::size_t num_agents, std::size_t check_count, Rng &rng, Channel &channel) {
  if (check_count > photons.size()) throw InvalidArgument("more check photons requested than exist");
  DetectionVerdict verdict;
  verdict.checked_photons = sample_without_replacement(photons.size(), check_count, rng);

  for (std::size_t index : verdict.checked_photons) {
    PhotonRecord &p = photons[index];
    p.assign(PhotonRole::FirstCheck);
    channel.log.append(make_event(Phase::FirstDetection, EventKind::AnnouncementRequested, PartyId::alice(), p.id));

    RotationAngle announced_total;
    for (std::size_t k = 0; k < num_agents; ++k) {
      const auto honest = ledger.get(k, p.id);
      if (!honest) throw InvariantViolation("ledger has no angle for agent " + std::to_string(k));
      RotationAngle announced = *honest;
      if (channel.hook && k == channel.adversary_agent) {
        announced = channel.hook->on_check_announcement(p, *honest);
        check_photon_register(p);
      }
      Event e = make_event(Phase::FirstDetection, EventKind::Announced, PartyId::agent(k), p.id);
      e.angle = announced;
      channel.log.append(std::move(e));
      announced_total += announced;
    }

    rotate_photon(p, -announced_total);
    const ZResult z = measure_photon_z(p, rng);
    Event m = make_event(Phase::FirstDetection, EventKind::Measured, PartyId::alice(), p.id);
    m.basis = "Z";
    m.outcome = z.outcome;
    m.probability = z.probability;
    channel.log.append(std::move(m));
    verdict.pass_probabilities.push_back(z.p0);
    if (z.outcome != 0) verdict.failed_photons.push_back(p.id);
  }

  verdict.pass = verdict.failed_photons.empty();
  Event v = make_event(Phase::FirstDetection, EventKind::Verdict, PartyId::alice(), std::nullopt);
  v.pass = verdict.pass;
  v.flagged = verdict.failed_photons;
  if (!verdict.pass) v.detail = "eavesdropping_detected";
  channel.log.append(std::move(v));
  return verdict;
}

void assign_payload_roles(std::vector<PhotonRecord> &photons, std::size_t second_checks, Rng &rng) {
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < photons.size(); ++i)
    if (photons[i].role == PhotonRole::Unassigned) free.push_back(i);
  if (second_checks > free.size()) throw InvalidArgument("not enough photons for the second-detection checks");

  const auto picks = sample_without_replacement(free.size(), second_checks, rng);
  std::vector<bool> is_check(free.size(), false);
  for (std::size_t k : picks) is_check[k] = true;
  for (std::size_t k = 0; k < free.size(); ++k) {
    photons[free[k]].assign(is_check[k] ? PhotonRole::SecondCheck : PhotonRole::Message);
  }
}

void encode_message(std::vector<PhotonRecord> &photons, std::span<const int> message,
                    std::span<const int> check_bits_in, Channel *channel) {
  check_bits(message, "message");
  check_bits(check_bits_in, "check bits");
  std::size_t n_message = 0;
  std::size_t n_check = 0;
  for (const auto &p : photons) {
    n_message += p.role == PhotonRole::Message;
    n_check += p.role == PhotonRole::SecondCheck;
  }
  if (n_message != message.size()) {
    throw InvalidArgument("message has " + std::to_string(message.size()) + " bits but " + std::to_string(n_message) +
                          " photons carry the message");
  }
  if (n_check != check_bits_in.size()) {
    throw InvalidArgument("check bit count does not match second-detection photons");
  }

  const Unitary flip = minus_i_sigma_y();
  std::size_t mi = 0;
  std::size_t ci = 0;
  for (auto &p : photons) {
    int bit;
    if (p.role == PhotonRole::Message) {
      bit = message[mi++];
    } else if (p.role == PhotonRole::SecondCheck) {
      bit = check_bits_in[ci++];
    } else {
      continue;
    }
    if (bit == 1) p.state = apply_unitary(p.state, {p.photon_qubit()}, flip);
    if (channel) channel->log.append(make_event(Phase::Encoding, EventKind::Encoded, PartyId::alice(), p.id));
  }
}

RecoveryResult recovery_phase(std::vector<PhotonRecord> &photons, const AngleLedger &ledger, std::size_t num_agents,
                              Rng &rng, Channel &channel) {
  if (num_agents < 2) throw InvalidArgument("recovery needs at least 2 agents");
  const PartyId receiver = PartyId::agent(num_agents - 1);
  const Hop hop{PartyId::alice(), receiver};

  std::vector<PhotonRecord *> payload;
  for (auto &p : photons)
    if (p.role == PhotonRole::Message || p.role == PhotonRole::SecondCheck) payload.push_back(&p);

  for (PhotonRecord *p : payload) {
    Event e = make_event(Phase::Recovery, EventKind::Sent, PartyId::alice(), p->id);
    e.to = receiver;
    channel.log.append(std::move(e));
    if (channel.hook) {
      p->state = channel.hook->on_photon_return(hop, p->id, std::move(p->state));
      check_photon_register(*p);
    }
  }

  // Every agent must disclose before anything can be decoded.
  for (std::size_t k = 0; k < num_agents; ++k) {
    for (PhotonRecord *p : payload) {
      if (!ledger.get(k, p->id)) {
        throw DecodeRefused("agent " + std::to_string(k) + " withheld its angle for photon " + std::to_string(p->id),
                            k);
      }
    }
  }
  for (PhotonRecord *p : payload) {
    for (std::size_t k = 0; k < num_agents; ++k) {
      Event e = make_event(Phase::Recovery, EventKind::Announced, PartyId::agent(k), p->id);
      e.angle = *ledger.get(k, p->id);
      channel.log.append(std::move(e));
    }
  }

  RecoveryResult result;
  for (PhotonRecord *p : payload) {
    RotationAngle total;
    for (std::size_t k = 0; k < num_agents; ++k) total += *ledger.get(k, p->id);
    rotate_photon(*p, -total);
    const ZResult z = measure_photon_z(*p, rng);
    Event m = make_event(Phase::Recovery, EventKind::Measured, receiver, p->id);
    m.basis = "Z";
    m.outcome = z.outcome;
    m.probability = z.probability;
    channel.log.append(std::move(m));
    result.outcome_probabilities.push_back(z.probability);
    if (p->role == PhotonRole::Message) {
      result.message.push_back(z.outcome);
    } else {
      result.check_bits.push_back(z.outcome);
      result.check_positions.push_back(p->position);
    }
  }
  return result;
}

SecondDetectionVerdict second_detection(std::span<const int> decoded_checks,
                                        std::span<const std::size_t> check_positions,
                                        std::span<const int> expected_checks) {
  if (decoded_checks.size() != expected_checks.size() || check_positions.size() != expected_checks.size()) {
    throw InvalidArgument("second detection: decoded, positions and expected lengths differ");
  }
  SecondDetectionVerdict v;
  for (std::size_t i = 0; i < expected_checks.size(); ++i) {
    if (decoded_checks[i] != expected_checks[i]) v.mismatched_positions.push_back(check_positions[i]);
  }
  v.pass = v.mismatched_positions.empty();
  return v;
}

ProtocolOutcome run_protocol(const ProtocolConfig &config, AdversaryHook *adversary) {
  config.validate();
  ProtocolOutcome out;
  Rng rng(config.seed);
  Channel channel{out.transcript, adversary, config.adversary_agent()};
  if (adversary) adversary->on_start(derive_seed(config.seed, kAdversaryStream));

  if (config.message) {
    out.sent = *config.message;
  } else {
    out.sent.resize(config.message_length);
    for (auto &b : out.sent) b = rng.bit();
  }

  const std::size_t n = config.sequence_length();
  const std::size_t K = config.num_agents;
  auto photons = prepare_sequence(n, &out.transcript);
  const AngleLedger ledger = encryption_phase(photons, K, config.angle_distribution, rng, channel);

  const DetectionVerdict first = first_detection(photons, ledger, K, config.first_check_count(), rng, channel);
  out.first_detection_pass = first.pass;
  out.first_detection_pass_probabilities = first.pass_probabilities;
  if (!first.pass) return out;

  assign_payload_roles(photons, config.num_second_detection_checks, rng);
  Bits check_bits(config.num_second_detection_checks);
  for (auto &b : check_bits) b = rng.bit();
  encode_message(photons, out.sent, check_bits, &channel);
  for (const auto &p : photons)
    if (p.role == PhotonRole::Message) out.message_angles.push_back(ledger.sum(p.id));

  AngleLedger disclosed = ledger;
  for (std::size_t a : config.withheld_agents) disclosed = disclosed.without_agent(a);

  RecoveryResult recovered;
  try {
    recovered = recovery_phase(photons, disclosed, K, rng, channel);
  } catch (const DecodeRefused &refused) {
    Event v = make_event(Phase::Recovery, EventKind::Verdict, PartyId::agent(K - 1), std::nullopt);
    v.pass = false;
    v.flagged = {refused.agent()};
    v.detail = "decode_refused";
    out.transcript.append(std::move(v));
    out.decode_refused = true;
    return out;
  }
  out.decoded = recovered.message;
  out.recovery_probabilities = recovered.outcome_probabilities;

  const auto second = second_detection(recovered.check_bits, recovered.check_positions, check_bits);
  out.second_detection_pass = second.pass;
  Event v = make_event(Phase::SecondDetection, EventKind::Verdict, PartyId::alice(), std::nullopt);
  v.pass = second.pass;
  v.flagged = second.mismatched_positions;
  if (!second.pass) v.detail = "check_bit_mismatch";
  out.transcript.append(std::move(v));

  if (adversary) {
    std::vector<PhotonRecord> message_photons;
    for (const auto &p : photons)
      if (p.role == PhotonRole::Message) message_photons.push_back(p);
    out.guesses = adversary->on_finish(message_photons);
  }
  return out;
}

}  // namespace qss
