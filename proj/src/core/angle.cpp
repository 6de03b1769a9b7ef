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

#include "qss/angle.hpp"

#include <cmath>

#include "qss/error.hpp"

namespace qss {

RotationAngle::RotationAngle(double radians) {
  if (!std::isfinite(radians)) {
    throw InvalidArgument("rotation angle must be finite");
  }
  double r = std::fmod(radians, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod + shift can land exactly on 2π after rounding.
  if (r >= kTwoPi) r = 0.0;
  radians_ = r;
}

double RotationAngle::circular_distance(RotationAngle other) const {
  double d = std::fabs(radians_ - other.radians_);
  return d > std::numbers::pi ? kTwoPi - d : d;
}

}  // namespace qss
