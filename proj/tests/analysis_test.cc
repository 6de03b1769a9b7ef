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

#include "qss/analysis.hpp"
#include "qss/error.hpp"

using namespace qss;

TEST(Indistinguishability, random_specs) {
  Rng rng(2);
  for (std::size_t d : {2u, 4u, 8u}) {
    for (int i = 0; i < 10; ++i) {
      const Entangler e(random_entangler_spec(rng, d));
      const auto r = indistinguishability(e, RotationAngle(kTwoPi * rng.uniform()));
      EXPECT_LE(r.trace_distance, 1e-10);
      EXPECT_LE(r.helstrom, 0.5 + 5e-11);
    }
  }
}

// Without E⁻¹ the two encodings are orthogonal for real photon states.
TEST(Indistinguishability, joint_states_are_perfectly_distinguishable) {
  Rng rng(3);
  const Entangler e(random_entangler_spec(rng, 2));
  const auto r = joint_state_distinguishability(e, RotationAngle(0.9));
  EXPECT_NEAR(r.trace_distance, 1.0, 1e-10);
  EXPECT_NEAR(r.helstrom, 1.0, 1e-10);
}

TEST(Wilson, reference_values) {
  const Interval half = wilson_interval(50, 100);
  EXPECT_NEAR(half.low, 0.4038, 1e-4);
  EXPECT_NEAR(half.high, 0.5962, 1e-4);
  const Interval zero = wilson_interval(0, 10);
  EXPECT_EQ(zero.low, 0.0);
  EXPECT_NEAR(zero.high, 0.2775, 1e-4);
  const Interval none = wilson_interval(0, 0);
  EXPECT_EQ(none.low, 0.0);
  EXPECT_EQ(none.high, 1.0);
}

TEST(MonteCarlo, honest_report) {
  ProtocolConfig c;
  c.seed = 8;
  c.num_second_detection_checks = 2;
  const auto r = monte_carlo(c, std::nullopt, {20, 1, false}).report;
  EXPECT_EQ(r.trials, 20u);
  EXPECT_EQ(r.first_detection_pass_rate, 1.0);
  EXPECT_EQ(r.recovery_accuracy, 1.0);
  EXPECT_EQ(r.second_detection_passes, 20u);
  EXPECT_FALSE(r.attacker_accuracy.has_value());
  EXPECT_FALSE(r.attacker_ci.has_value());
  EXPECT_EQ(r.max_trace_distance, 0.0);
  EXPECT_EQ(r.check_failures, 0u);
  EXPECT_EQ(r.seed, 8u);
}

TEST(MonteCarlo, thread_count_does_not_change_results) {
  ProtocolConfig c;
  c.seed = 77;
  AttackConfig attack{qgwz_spec(StateVector::normalized(2, {1, 1, 1, 1})), {}, AnnouncementMode::Adaptive, "qgwz"};
  const auto one = monte_carlo(c, attack, {40, 1, true});
  const auto many = monte_carlo(c, attack, {40, 7, true});
  EXPECT_EQ(one.report, many.report);
  ASSERT_EQ(one.transcripts.size(), 40u);
  EXPECT_EQ(one.transcripts, many.transcripts);
  EXPECT_TRUE(one.report.attacker_accuracy.has_value());
  EXPECT_EQ(one.report.first_detection_pass_rate, 1.0);
}

TEST(MonteCarlo, naive_attack_failure_rate) {
  EntanglerSpec spec;
  spec.alpha = std::sqrt(0.5);
  spec.beta = std::sqrt(0.5);
  spec.theta_prime = RotationAngle(1.0);
  ProtocolConfig c;
  c.seed = 9;
  const auto r = monte_carlo(c, AttackConfig{spec, {}, AnnouncementMode::Naive, "general"}, {300, 2, false}).report;
  const double p = 0.5 * std::sin(1.0) * std::sin(1.0);
  const double n = static_cast<double>(r.check_measurements);
  EXPECT_NEAR(static_cast<double>(r.check_failures) / n, p, 4 * std::sqrt(p * (1 - p) / n));
  EXPECT_LT(r.first_detection_pass_rate, 0.01);
  EXPECT_NEAR(r.min_check_pass_probability, 1 - p, 1e-12);
}

TEST(MonteCarlo, rejects_zero_trials) {
  EXPECT_THROW(monte_carlo(ProtocolConfig{}, std::nullopt, {0, 1, false}), InvalidArgument);
}

TEST(Sweep, default_grid) {
  SweepGrid g = SweepGrid::default_grid();
  const auto rows = sweep(g);
  ASSERT_EQ(rows.size(), 125u);
  EXPECT_EQ(rows[0].alpha_sq, 0.0);
  EXPECT_EQ(rows[1].theta, g.theta[1]);
  EXPECT_EQ(rows[5].alpha_sq, 0.25);
  EXPECT_EQ(rows[25].theta_prime, g.theta_prime[1]);
  for (const auto &row : rows) {
    EXPECT_LE(row.trace_distance, 1e-10);
    EXPECT_NEAR(row.helstrom, 0.5 * (1 + row.trace_distance), 1e-15);
    // No entanglement (β = 0) or no shift (θ′ = 0): nothing to leak at all.
    if (row.alpha_sq == 1.0 || row.theta_prime.radians() == 0.0) EXPECT_EQ(row.trace_distance, 0.0);
  }
}

TEST(Sweep, validation) {
  SweepGrid g = SweepGrid::default_grid();
  g.alpha_sq = {1.5};
  EXPECT_THROW(sweep(g), InvalidArgument);
  g = SweepGrid::default_grid();
  g.theta.clear();
  EXPECT_THROW(sweep(g), InvalidArgument);
}
