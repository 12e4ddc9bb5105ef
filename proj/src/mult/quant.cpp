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

#include "axnas/mult/quant.hpp"

#include <algorithm>
#include <stdexcept>

namespace axnas::mult {

namespace {
constexpr double kMinScaleRange = 1e-8;
}

QuantParams calibrate_range(double lo, double hi, QuantScheme scheme) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
    throw std::invalid_argument("calibrate: invalid range");
  }
  QuantParams q;
  q.scheme = scheme;
  if (scheme == QuantScheme::kSymmetricUnsigned) {
    if (lo < 0.0) {
      throw std::invalid_argument(
          "calibrate: symmetric_unsigned requires non-negative values");
    }
    q.scale = (hi > 0.0 ? hi : kMinScaleRange) / 255.0;
    q.zero_point = 0;
    return q;
  }
  if (hi == lo) {
    // Constant tensor: pick the zero point that represents the constant.
    q.scale = std::max(std::abs(hi), kMinScaleRange) / 255.0;
  } else {
    q.scale = (hi - lo) / 255.0;
  }
  const double zp = round_half_away(-lo / q.scale);
  q.zero_point = static_cast<int>(std::clamp(zp, 0.0, 255.0));
  return q;
}

QuantParams calibrate(std::span<const double> values, QuantScheme scheme) {
  if (values.empty()) throw std::invalid_argument("calibrate: empty input");
  double lo = values.front();
  double hi = values.front();
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("calibrate: non-finite input");
    }
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return calibrate_range(lo, hi, scheme);
}

}  // namespace axnas::mult
