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

#include "qss/transcript.hpp"

#include <cstdio>
#include <sstream>

#include "qss/error.hpp"

namespace qss {

std::string PartyId::to_string() const {
  return is_alice() ? std::string("alice") : "agent" + std::to_string(index);
}

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::Preparation: return "preparation";
    case Phase::Encryption: return "encryption";
    case Phase::FirstDetection: return "first_detection";
    case Phase::Encoding: return "encoding";
    case Phase::Recovery: return "recovery";
    case Phase::SecondDetection: return "second_detection";
  }
  return "?";
}

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::Prepared: return "prepared";
    case EventKind::Rotated: return "rotated";
    case EventKind::Sent: return "sent";
    case EventKind::AnnouncementRequested: return "announcement_requested";
    case EventKind::Announced: return "announced";
    case EventKind::Encoded: return "encoded";
    case EventKind::Measured: return "measured";
    case EventKind::Verdict: return "verdict";
  }
  return "?";
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void Transcript::append(Event e) {
  if (!events_.empty() && e.phase < events_.back().phase) {
    throw InvariantViolation("transcript phase order violated: " + std::string(to_string(e.phase)) + " after " +
                             std::string(to_string(events_.back().phase)));
  }
  events_.push_back(std::move(e));
}

std::string Transcript::serialize() const {
  std::ostringstream out;
  std::size_t seq = 0;
  for (const auto &e : events_) {
    out << seq++ << '\t' << to_string(e.phase) << '\t' << to_string(e.kind) << '\t';
    if (e.party) {
      out << e.party->to_string();
      if (e.to) out << "->" << e.to->to_string();
    } else {
      out << '-';
    }
    out << '\t';
    if (e.photon) out << *e.photon; else out << '-';
    out << '\t';

    std::vector<std::string> payload;
    switch (e.kind) {
      case EventKind::Rotated:
      case EventKind::Encoded:
        payload.emplace_back("committed");
        break;
      case EventKind::Announced:
        if (e.angle) payload.push_back("angle=" + format_real(e.angle->radians()));
        break;
      case EventKind::Measured:
        payload.push_back("basis=" + e.basis);
        if (e.outcome) payload.push_back("outcome=" + std::to_string(*e.outcome));
        if (e.probability) payload.push_back("probability=" + format_real(*e.probability));
        break;
      case EventKind::Verdict: {
        if (e.pass) payload.push_back(*e.pass ? "result=pass" : "result=fail");
        std::string flagged = "flagged=";
        for (std::size_t i = 0; i < e.flagged.size(); ++i) {
          if (i) flagged += ',';
          flagged += std::to_string(e.flagged[i]);
        }
        payload.push_back(flagged);
        if (!e.detail.empty()) payload.push_back("detail=" + e.detail);
        break;
      }
      default:
        break;
    }
    if (payload.empty()) {
      out << '-';
    } else {
      for (std::size_t i = 0; i < payload.size(); ++i) out << (i ? " " : "") << payload[i];
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace qss
