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

#include "qss/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "qss/analysis.hpp"
#include "qss/attack.hpp"
#include "qss/rng.hpp"
#include "qss/state.hpp"

namespace qss {

namespace {

FixtureResult check(std::string name, double value, double expected, double tol) {
  const bool pass = std::isfinite(value) && std::fabs(value - expected) <= tol;
  return {std::move(name), value, expected, tol, pass};
}

double max_entry_error(const Matrix &a, const Matrix &b) { return a.max_abs_diff(b); }

}  // namespace

std::vector<FixtureResult> run_fixtures() {
  std::vector<FixtureResult> out;
  Rng rng(0x5eed);

  {
    double worst = 0.0;
    double worst_norm = 0.0;
    for (int k = 0; k < 16; ++k) {
      const auto f = qgwz_fixture(RotationAngle(kTwoPi * k / 16.0));
      worst = std::max(worst, std::fabs(1.0 - std::abs(inner_product(f.ht_factor0, f.ht_factor1))));
      worst_norm = std::max(worst_norm, std::fabs(1.0 - f.ht_factor0.norm()));
    }
    out.push_back(check("HT-overlap", 1.0 - worst, 1.0, 1e-12));
    out.push_back(check("HT-norm", 1.0 - worst_norm, 1.0, 1e-12));
  }

  {
    double additivity = 0.0;
    double commutator = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const RotationAngle a(kTwoPi * rng.uniform());
      const RotationAngle b(kTwoPi * rng.uniform());
      const Matrix ua = rotation_operator(a).matrix();
      const Matrix ub = rotation_operator(b).matrix();
      additivity = std::max(additivity, max_entry_error(ua * ub, rotation_operator(a + b).matrix()));
      commutator = std::max(commutator, frobenius_norm(ua * ub - ub * ua));
    }
    out.push_back(check("angle-additivity", additivity, 0.0, 1e-12));
    out.push_back(check("rotation-commutator", commutator, 0.0, 1e-12));
  }

  {
    const Matrix expected{{0.0, -1.0}, {1.0, 0.0}};
    const double err = max_entry_error(rotation_operator(RotationAngle(-1.5 * std::numbers::pi)).matrix(), expected);
    out.push_back(check("encode-matrix", err, 0.0, 1e-15));
  }

  {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const RotationAngle theta(kTwoPi * rng.uniform());
      const StateVector chi(1, {std::cos(theta.radians()), std::sin(theta.radians())});
      const RotationAngle shifted = theta + RotationAngle(-1.5 * std::numbers::pi);
      const StateVector want(1, {std::cos(shifted.radians()), std::sin(shifted.radians())});
      const StateVector got = apply_unitary(chi, {0}, minus_i_sigma_y());
      worst = std::max(worst, 1.0 - std::abs(inner_product(want, got)));
    }
    out.push_back(check("encode-angle", worst, 0.0, 1e-12));
  }

  {
    double inverse = 0.0;
    double round_trip = 0.0;
    for (std::size_t d : {2u, 4u, 8u}) {
      for (int i = 0; i < 5; ++i) {
        const Entangler e(random_entangler_spec(rng, d));
        const Matrix prod = e.inverse().matrix() * e.forward().matrix();
        inverse = std::max(inverse, max_entry_error(prod, Matrix::identity(prod.dim())));
        for (int t = 0; t < 4; ++t) {
          round_trip = std::max(round_trip, indistinguishability(e, RotationAngle(kTwoPi * rng.uniform())).trace_distance);
        }
      }
    }
    out.push_back(check("entangler-inverse", inverse, 0.0, 1e-10));
    out.push_back(check("round-trip", round_trip, 0.0, 1e-10));
  }

  {
    // Controlled-controlled-(−iσy) against the family member it belongs to.
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const StateVector a = random_state(rng, 2);
      const Entangler e(qgwz_spec(a));
      const StateVector chi = random_state(rng, 1);
      const StateVector input = tensor(a, chi);
      const StateVector direct = apply_controlled(input, {0, 1}, 2, minus_i_sigma_y());
      const StateVector built = e.entangle(chi);
      double diff = 0.0;
      for (std::size_t k = 0; k < direct.dim(); ++k) diff = std::max(diff, std::abs(direct[k] - built[k]));
      worst = std::max(worst, diff);
    }
    out.push_back(check("qgwz-special-case", worst, 0.0, 1e-10));
  }
  return out;
}

std::string format_fixtures(const std::vector<FixtureResult> &results) {
  std::string out;
  char buf[256];
  for (const auto &r : results) {
    std::snprintf(buf, sizeof buf, "%s %s value=%.17g expected=%.17g tol=%.3g\n", r.pass ? "PASS" : "FAIL",
                  r.name.c_str(), r.value, r.expected, r.tolerance);
    out += buf;
  }
  return out;
}

}  // namespace qss
