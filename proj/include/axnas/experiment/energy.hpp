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

#include <cstdint>

#include <json.hpp>

#include "axnas/experiment/macs.hpp"
#include "axnas/mult/multiplier.hpp"

namespace axnas::experiment {

/// Energy gap between an FP32 multiplication and an exact 8-bit one.
inline constexpr double kDefaultFp32Factor = 18.5;

struct EnergyReport {
  std::uint64_t approx_macs = 0;
  std::uint64_t exact_flops = 0;
  double energy_approx_units = 0.0;  // approx_macs * multiplier energy
  double energy_exact_units = 0.0;   // exact_flops * FP32 energy
  double total = 0.0;
  double savings_vs_fp32_pct = 0.0;
  double savings_vs_exact8_pct = 0.0;
  double approx_fraction_pct = 0.0;
};

/// E_fp32 = fp32_factor * exact8 energy. Approximable MACs are priced at the
/// multiplier's energy, everything else at E_fp32. Savings compare against
/// the same counts with every op at E_fp32, and with the approximable MACs
/// on the exact 8-bit multiplier. Empty workloads report 0 everywhere.
EnergyReport energy_report(std::uint64_t approx_macs, std::uint64_t exact_flops,
                           const mult::MultiplierSpec& multiplier,
                           const mult::MultiplierSpec& exact8,
                           double fp32_factor = kDefaultFp32Factor);
EnergyReport energy_report(const MacCounts& counts, const mult::MultiplierSpec& multiplier,
                           const mult::MultiplierSpec& exact8,
                           double fp32_factor = kDefaultFp32Factor);

nlohmann::json energy_report_to_json(const EnergyReport& r);

}  // namespace axnas::experiment
