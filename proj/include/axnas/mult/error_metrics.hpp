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

#include "axnas/mult/multiplier.hpp"

namespace axnas::mult {

/// Error characteristics of a multiplier, in percent, over all 65536
/// operand pairs.
///
/// With err = approx - exact:
///   EP  = share of pairs with err != 0
///   MAE = mean |err| / 65535
///   WCE = max |err| / 65535
///   MRE = mean of |err| / exact over pairs with exact != 0
struct ErrorMetrics {
  double mre_pct = 0.0;
  double ep_pct = 0.0;
  double mae_pct = 0.0;
  double wce_pct = 0.0;
};

inline constexpr double kErrorNormalizer = 65535.0;

ErrorMetrics compute_error_metrics(const MultiplierSpec& m);

}  // namespace axnas::mult
