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

#include "axnas/experiment/energy.hpp"

#include "axnas/errors.hpp"

namespace axnas::experiment {

EnergyReport energy_report(std::uint64_t approx_macs, std::uint64_t exact_flops,
                           const mult::MultiplierSpec& multiplier,
                           const mult::MultiplierSpec& exact8, double fp32_factor) {
  if (!(fp32_factor > 0.0)) throw ConfigError("fp32_factor must be > 0");
  const double e_fp32 = fp32_factor * exact8.energy_per_op();
  const double a = static_cast<double>(approx_macs);
  const double x = static_cast<double>(exact_flops);
  EnergyReport r;
  r.approx_macs = approx_macs;
  r.exact_flops = exact_flops;
  r.energy_approx_units = a * multiplier.energy_per_op();
  r.energy_exact_units = x * e_fp32;
  r.total = r.energy_approx_units + r.energy_exact_units;
  const double all_fp32 = (a + x) * e_fp32;
  const double on_exact8 = a * exact8.energy_per_op() + x * e_fp32;
  if (all_fp32 > 0.0) r.savings_vs_fp32_pct = 100.0 * (1.0 - r.total / all_fp32);
  if (on_exact8 > 0.0) r.savings_vs_exact8_pct = 100.0 * (1.0 - r.total / on_exact8);
  if (a + x > 0.0) r.approx_fraction_pct = 100.0 * a / (a + x);
  return r;
}

EnergyReport energy_report(const MacCounts& counts, const mult::MultiplierSpec& multiplier,
                           const mult::MultiplierSpec& exact8, double fp32_factor) {
  return energy_report(counts.approx_macs, counts.exact_flops, multiplier, exact8, fp32_factor);
}

nlohmann::json energy_report_to_json(const EnergyReport& r) {
  return {{"approx_macs", r.approx_macs},
          {"exact_flops", r.exact_flops},
          {"energy_approx_units", r.energy_approx_units},
          {"energy_exact_units", r.energy_exact_units},
          {"total", r.total},
          {"savings_vs_fp32_pct", r.savings_vs_fp32_pct},
          {"savings_vs_exact8_pct", r.savings_vs_exact8_pct},
          {"approx_fraction_pct", r.approx_fraction_pct}};
}

}  // namespace axnas::experiment
