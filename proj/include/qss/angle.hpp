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

#include <numbers>

namespace qss {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// An angle in radians, always stored in the canonical range [0, 2π).
/// All arithmetic wraps modulo 2π.
class RotationAngle {
 public:
  constexpr RotationAngle() = default;
  explicit RotationAngle(double radians);

  double radians() const { return radians_; }

  RotationAngle operator+(RotationAngle other) const { return RotationAngle(radians_ + other.radians_); }
  RotationAngle operator-(RotationAngle other) const { return RotationAngle(radians_ - other.radians_); }
  RotationAngle operator-() const { return RotationAngle(-radians_); }
  RotationAngle &operator+=(RotationAngle other) { return *this = *this + other; }

  bool operator==(const RotationAngle &) const = default;

  /// Distance on the circle, in [0, π].
  double circular_distance(RotationAngle other) const;

 private:
  double radians_ = 0.0;
};

}  // namespace qss
