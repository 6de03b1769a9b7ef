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

#include <algorithm>

#include "json.hpp"
#include "qss/error.hpp"
#include "qss/scenario.hpp"
#include "qss/verify.hpp"

using namespace qss;

namespace {

ConfigError parse_error(const std::string &text) {
  try {
    Scenario::parse(text);
  } catch (const ConfigError &e) {
    return e;
  }
  ADD_FAILURE() << "expected ConfigError for " << text;
  return ConfigError("");
}

}  // namespace

TEST(Scenario, minimal) {
  const Scenario s = Scenario::parse(R"({"protocol": {"agents": 4}})");
  EXPECT_EQ(s.protocol.num_agents, 4u);
  EXPECT_EQ(s.protocol.message_length, 32u);
  EXPECT_FALSE(s.attack.has_value());
  EXPECT_TRUE(s.expects_honesty());
  EXPECT_EQ(s.trials, 1u);
}

TEST(Scenario, round_trip) {
  const char *configs[] = {
      R"({"protocol": {"agents": 3, "message_bits": "0110", "seed": 5, "second_checks": 2,
                       "angle_distribution": "discrete", "withheld_agents": [2]},
          "run": {"trials": 7, "threads": 2, "expect_honest": false, "sweep": {"alpha_sq": [0.5], "theta": [1, 2], "theta_prime": [3]}}})",
      R"({"protocol": {"agents": 5, "adversary_position": 0},
          "attack": {"kind": "qgwz", "ancilla_state": [[0.5, 0], [0.5, 0], [0.5, 0], [0, 0.5]],
                     "guess_rule": "inverted"}})",
      R"({"protocol": {"agents": 2},
          "attack": {"kind": "general", "epsilon": [[1, 0], [0, 0]], "epsilon_perp": [[0, 0], [1, 0]],
                     "alpha": [0.6, 0], "beta": [0, 0.8], "theta_prime": 1.25, "announcement": "naive",
                     "guess_rule": {"epsilon": 1, "epsilon_perp": 1}}})",
  };
  for (const char *text : configs) {
    const Scenario s = Scenario::parse(text);
    const std::string once = s.serialize();
    const Scenario back = Scenario::parse(once);
    EXPECT_EQ(back.serialize(), once);
    EXPECT_EQ(back.protocol.seed, s.protocol.seed);
    EXPECT_EQ(back.trials, s.trials);
    EXPECT_EQ(back.expects_honesty(), s.expects_honesty());
    EXPECT_EQ(back.attack.has_value(), s.attack.has_value());
    if (s.attack) {
      EXPECT_EQ(back.attack->rule, s.attack->rule);
      EXPECT_EQ(back.attack->kind, s.attack->kind);
      EXPECT_EQ(back.attack->spec.alpha, s.attack->spec.alpha);
      EXPECT_EQ(back.attack->spec.theta_prime, s.attack->spec.theta_prime);
    }
  }
}

TEST(Scenario, unknown_key_reports_key_and_line) {
  const auto e = parse_error("{\n  \"protocol\": {\n    \"agents\": 3,\n    \"agnets\": 4\n  }\n}");
  EXPECT_EQ(e.key(), "protocol.agnets");
  EXPECT_EQ(e.line(), 4);
  EXPECT_EQ(parse_error(R"({"protocol": {"agents": 3}, "extra": 1})").key(), "config.extra");
  EXPECT_EQ(parse_error(R"({"protocol": {"agents": 3}, "run": {"trails": 1}})").key(), "run.trails");
}

TEST(Scenario, missing_or_bad_values) {
  EXPECT_EQ(parse_error(R"({"protocol": {}})").key(), "protocol.agents");
  EXPECT_EQ(parse_error(R"({"run": {}})").key(), "protocol");
  EXPECT_EQ(parse_error(R"({"protocol": {"agents": -1}})").key(), "protocol.agents");
  EXPECT_EQ(parse_error(R"({"protocol": {"agents": "3"}})").key(), "protocol.agents");
  EXPECT_EQ(parse_error(R"({"protocol": {"agents": 1}})").key(), "protocol");
  EXPECT_EQ(parse_error(R"({"protocol": {"agents": 3, "message_bits": "01x"}})").key(), "protocol.message_bits");
  EXPECT_EQ(parse_error(R"({"protocol": {"agents": 3}, "run": {"trials": 0}})").key(), "run.trials");
  EXPECT_EQ(parse_error(R"({"protocol": {"agents": 3}, "run": {"sweep": {"theta": []}}})").key(), "run.sweep");
  EXPECT_EQ(parse_error(R"({"protocol": {"agents": 3}, "attack": {"kind": "magic"}})").key(), "attack.kind");
  EXPECT_EQ(parse_error(R"({"protocol": {"agents": 3}, "attack": {"kind": "qgwz"}})").key(), "attack.ancilla_state");
  EXPECT_EQ(parse_error(R"({"protocol": {"agents": 3}, "attack": {"kind": "none", "alpha": [1, 0]}})").key(),
            "attack.alpha");
}

TEST(Scenario, syntax_error_line) {
  const auto e = parse_error("{\n\"protocol\": {\"agents\": 3,,}\n}");
  EXPECT_EQ(e.line(), 2);
}

TEST(Scenario, ancilla_normalization) {
  // Within 1e-6 of unit norm: accepted and renormalized.
  const Scenario s = Scenario::parse(
      R"({"protocol": {"agents": 3}, "attack": {"kind": "qgwz", "ancilla_state": [[0.5000001, 0], [0.5, 0], [0.5, 0], [0.5, 0]]}})");
  EXPECT_NEAR(s.attack->spec.input_state().norm(), 1.0, 1e-15);
  EXPECT_EQ(parse_error(R"({"protocol": {"agents": 3}, "attack": {"kind": "qgwz", "ancilla_state": [[1, 0], [1, 0], [0, 0], [0, 0]]}})")
                .key(),
            "attack.ancilla_state");
  EXPECT_EQ(parse_error(R"({"protocol": {"agents": 3}, "attack": {"kind": "qgwz", "ancilla_state": [[0, 0], [0, 0], [0, 0], [0, 0]]}})")
                .key(),
            "attack.ancilla_state");
  EXPECT_EQ(parse_error(R"({"protocol": {"agents": 3}, "attack": {"kind": "qgwz", "ancilla_state": [[1, 0], [0, 0]]}})")
                .key(),
            "attack.ancilla_state");
}

TEST(Scenario, sweep_grid_template) {
  const Scenario plain = Scenario::parse(R"({"protocol": {"agents": 3}})");
  EXPECT_EQ(plain.sweep_grid().theta.size(), 5u);
  EXPECT_EQ(plain.sweep_grid().spec_template.ancilla_dim, 2u);
  const Scenario q = Scenario::parse(
      R"({"protocol": {"agents": 3}, "attack": {"kind": "qgwz", "ancilla_state": [[1, 0], [0, 0], [0, 0], [0, 0]]}})");
  EXPECT_EQ(q.sweep_grid().spec_template.ancilla_dim, 4u);
}

TEST(Scenario, one_point_sweep) {
  const Scenario s = Scenario::parse(
      R"({"protocol": {"agents": 3}, "run": {"sweep": {"theta_prime": [1.0], "alpha_sq": [0.5], "theta": [0.3]}}})");
  const auto rows = sweep(s.sweep_grid());
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_LE(rows[0].trace_distance, 1e-10);
  const std::string table = format_sweep_table(rows);
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 2);
}

TEST(Report, formats) {
  ScenarioReport r;
  r.trials = 10;
  r.first_detection_passes = 10;
  r.first_detection_pass_rate = 1.0;
  r.recovery_accuracy = 1.0;
  r.seed = 3;
  const std::string line = format_report(r, ReportFormat::JsonLines);
  auto j = nlohmann::ordered_json::parse(line);
  std::vector<std::string> keys;
  for (const auto &item : j.items()) keys.push_back(item.key());
  EXPECT_EQ(keys, std::vector<std::string>(std::begin(kReportFields), std::end(kReportFields)));
  EXPECT_TRUE(j["attacker_accuracy"].is_null());
  EXPECT_EQ(format_report(r, ReportFormat::Csv),
            "trials,attacker_accuracy,ci_low,ci_high,first_detection_pass_rate,recovery_accuracy,"
            "max_trace_distance,helstrom_bound,seed\n10,,,,1,1,0,0.5,3\n");
  r.attacker_accuracy = 0.25;
  r.attacker_ci = Interval{0.1, 0.4};
  j = nlohmann::ordered_json::parse(format_report(r, ReportFormat::JsonLines));
  EXPECT_EQ(j["attacker_accuracy"].get<double>(), 0.25);
  EXPECT_EQ(j["ci_high"].get<double>(), 0.4);
  EXPECT_NE(format_report(r, ReportFormat::Text).find("attacker accuracy           0.25"), std::string::npos);
  EXPECT_FALSE(detection_failed(r));
  r.first_detection_passes = 9;
  EXPECT_TRUE(detection_failed(r));
  EXPECT_EQ(parse_report_format("csv"), ReportFormat::Csv);
  EXPECT_FALSE(parse_report_format("xml").has_value());
}

TEST(Verify, fixtures_pass) {
  const auto results = run_fixtures();
  EXPECT_GE(results.size(), 8u);
  for (const auto &r : results) EXPECT_TRUE(r.pass) << r.name << " " << r.value;
  EXPECT_EQ(format_fixtures(results).rfind("PASS ", 0), 0u);
}
