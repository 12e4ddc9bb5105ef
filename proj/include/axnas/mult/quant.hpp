// Copyright 2026 The axnas Authors
// SPDX-License-Identifier: Apache-2.0
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

#include <cmath>
#include <cstdint>
#include <span>

namespace axnas::mult {

enum class QuantScheme { kAsymmetric, kSymmetricUnsigned };

/// Affine map between reals and unsigned 8-bit codes:
/// real = scale * (code - zero_point).
struct QuantParams {
  double scale = 1.0;
  int zero_point = 0;
  QuantScheme scheme = QuantScheme::kAsymmetric;
};

/// Round half away from zero. Used for every real-to-integer conversion.
inline double round_half_away(double x) { return std::round(x); }

/// Min/max calibration over a whole tensor. Throws std::invalid_argument on
/// empty or non-finite input, or negative values under kSymmetricUnsigned.
QuantParams calibrate(std::span<const double> values, QuantScheme scheme);

/// Calibration from an explicit [lo, hi] range (lo <= hi, both finite).
QuantParams calibrate_range(double lo, double hi, QuantScheme scheme);

inline std::uint8_t quantize(double x, const QuantParams& q) {
  const double v = round_half_away(x / q.scale) + q.zero_point;
  if (v <= 0.0) return 0;
  if (v >= 255.0) return 255;
  return static_cast<std::uint8_t>(v);
}

inline double dequantize(std::uint8_t v, const QuantParams& q) {
  return q.scale * (static_cast<int>(v) - q.zero_point);
}

}  // namespace axnas::mult
