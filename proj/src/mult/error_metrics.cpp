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

#include "axnas/mult/error_metrics.hpp"

#include <cstdlib>

namespace axnas::mult {

ErrorMetrics compute_error_metrics(const MultiplierSpec& m) {
  const auto table = m.table();
  long long wrong = 0;
  long long abs_sum = 0;
  long long worst = 0;
  double rel_sum = 0.0;
  long long nonzero = 0;
  for (int a = 0; a < 256; ++a) {
    for (int b = 0; b < 256; ++b) {
      const long long exact = static_cast<long long>(a) * b;
      const long long err =
          std::llabs(static_cast<long long>(table[(a << 8) | b]) - exact);
      wrong += err != 0;
      abs_sum += err;
      worst = std::max(worst, err);
      if (exact != 0) {
        rel_sum += static_cast<double>(err) / static_cast<double>(exact);
        ++nonzero;
      }
    }
  }
  constexpr double n = static_cast<double>(kTableSize);
  ErrorMetrics out;
  out.ep_pct = 100.0 * static_cast<double>(wrong) / n;
  out.mae_pct = 100.0 * (static_cast<double>(abs_sum) / n) / kErrorNormalizer;
  out.wce_pct = 100.0 * static_cast<double>(worst) / kErrorNormalizer;
  out.mre_pct = 100.0 * rel_sum / static_cast<double>(nonzero);
  return out;
}

}  // namespace axnas::mult
