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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qss/angle.hpp"

namespace qss {

/// Alice, or agent k of K. Agent 0 is the first hop after Alice; agent K-1
/// is the last agent, who receives and decodes the message.
struct PartyId {
  enum class Role { Alice, Agent };
  Role role = Role::Alice;
  std::size_t index = 0;

  static PartyId alice() { return {Role::Alice, 0}; }
  static PartyId agent(std::size_t k) { return {Role::Agent, k}; }
  bool is_alice() const { return role == Role::Alice; }
  std::string to_string() const;
  bool operator==(const PartyId &) const = default;
};

/// Protocol stages, in the order a run must visit them.
enum class Phase { Preparation, Encryption, FirstDetection, Encoding, Recovery, SecondDetection };

enum class EventKind { Prepared, Rotated, Sent, AnnouncementRequested, Announced, Encoded, Measured, Verdict };

std::string_view to_string(Phase p);
std::string_view to_string(EventKind k);

struct Event {
  Phase phase = Phase::Preparation;
  EventKind kind = EventKind::Prepared;
  std::optional<PartyId> party;
  std::optional<PartyId> to;  // Sent only
  std::optional<std::size_t> photon;

  std::optional<RotationAngle> angle;  // Announced
  std::string basis;                   // Measured
  std::optional<int> outcome;          // Measured
  std::optional<double> probability;   // Measured: Born probability of the observed outcome
  std::optional<bool> pass;            // Verdict
  std::vector<std::size_t> flagged;    // Verdict: offending photon ids / positions
  std::string detail;                  // Verdict

  bool operator==(const Event &) const = default;
};

/// Ordered event log of one protocol run. Appending an event from an
/// earlier phase than the last one throws InvariantViolation.
class Transcript {
 public:
  void append(Event e);
  const std::vector<Event> &events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }

  /// Line-delimited log, one event per line:
  ///   seq <TAB> phase <TAB> kind <TAB> party <TAB> photon <TAB> payload
  /// Absent fields print as "-"; reals use 17 significant digits.
  std::string serialize() const;

  bool operator==(const Transcript &) const = default;

 private:
  std::vector<Event> events_;
};

/// printf("%.17g").
std::string format_real(double x);

}  // namespace qss
