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

#include <string>
#include <variant>

#include "axnas/mult/multiplier.hpp"
#include "axnas/mult/quant.hpp"

namespace axnas {

/// Native real arithmetic.
struct Fp32Exact {};

/// 8-bit fixed point with every product looked up in a multiplier table.
struct Quant8 {
  mult::MultiplierPtr multiplier;
  mult::QuantScheme activation_scheme = mult::QuantScheme::kAsymmetric;
};

using ExecMode = std::variant<Fp32Exact, Quant8>;

inline bool is_quant8(const ExecMode& mode) {
  return std::holds_alternative<Quant8>(mode);
}

/// "fp32" or the multiplier name.
std::string mode_name(const ExecMode& mode);

}  // namespace axnas
