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

#include <string>
#include <vector>

namespace qss {

struct FixtureResult {
  std::string name;
  double value = 0.0;      // computed quantity (error, overlap, distance...)
  double expected = 0.0;   // what `value` is compared against
  double tolerance = 0.0;  // |value - expected| must not exceed this
  bool pass = false;
};

/// Built-in fixture suite: the corrected mid-attack state, rotation
/// identities, the encoding operator and angle shift, E⁻¹E = I and the
/// disentangle round trip for both bit values. Deterministic.
std::vector<FixtureResult> run_fixtures();

/// One line per fixture: "PASS|FAIL <name> value=<v> expected=<e> tol=<t>".
std::string format_fixtures(const std::vector<FixtureResult> &results);

}  // namespace qss
