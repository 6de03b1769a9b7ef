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

#include "qss/analysis.hpp"
#include "qss/protocol.hpp"

namespace qss {

/// A parsed scenario file.
///
/// The file is a JSON document with up to three sections; unknown keys are
/// rejected everywhere, and `protocol.agents` is the only required key.
///
///   {
///     "protocol": {"agents": 3, "message_length": 32 | "message_bits": "0101",
///                  "check_fraction_first": 0.5, "second_checks": 4,
///                  "angle_distribution": "continuous" | "discrete",
///                  "seed": 42, "adversary_position": 1, "withheld_agents": []},
///     "attack":   {"kind": "none" | "qgwz" | "general",
///                  "ancilla_state": [[re, im], ...],            (qgwz)
///                  "ancilla_dim": 2, "epsilon": [...], "epsilon_perp": [...],
///                  "prepared": [...], "alpha": [re, im], "beta": [re, im],
///                  "theta_prime": 1.5707963267948966,            (general)
///                  "announcement": "adaptive" | "naive",
///                  "guess_rule": "default" | {"epsilon": 0, "epsilon_perp": 1}},
///     "run":      {"trials": 100, "threads": 1, "expect_honest": true,
///                  "sweep": {"theta_prime": [...], "alpha_sq": [...], "theta": [...]}}
///   }
struct Scenario {
  ProtocolConfig protocol;
  std::optional<AttackConfig> attack;
  std::size_t trials = 1;
  std::size_t threads = 1;
  std::optional<SweepGrid> sweep;
  /// Overrides expects_honesty(); unset means "no attack configured".
  std::optional<bool> expect_honest;

  /// Throws ConfigError (with the offending key and, when known, its line).
  static Scenario parse(std::string_view text);
  static Scenario load(const std::string &path);
  /// Canonical JSON with every field spelled out; parse(serialize()) is
  /// the identity on the parsed value.
  std::string serialize() const;
  /// True when every verdict must pass: by default, when no attack is
  /// configured.
  bool expects_honesty() const { return expect_honest.value_or(!attack.has_value()); }
  /// The configured grid, or the default one with the attack's spec as
  /// template.
  SweepGrid sweep_grid() const;
};

enum class ReportFormat { JsonLines, Csv, Text };
std::optional<ReportFormat> parse_report_format(std::string_view name);

/// Stable report fields, in output order.
inline constexpr const char *kReportFields[] = {
    "trials",     "attacker_accuracy",  "ci_low",         "ci_high", "first_detection_pass_rate",
    "recovery_accuracy", "max_trace_distance", "helstrom_bound", "seed"};

std::string format_report(const ScenarioReport &report, ReportFormat format, const Scenario *echo = nullptr);
std::string format_sweep_table(const std::vector<SweepRow> &rows);

/// Any first- or second-detection verdict failed.
bool detection_failed(const ScenarioReport &report);

}  // namespace qss
