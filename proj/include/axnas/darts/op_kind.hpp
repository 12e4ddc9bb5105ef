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

#include <array>
#include <optional>
#include <string_view>

namespace axnas::darts {

/// Candidate operations on every cell edge. The declaration order is the
/// coordinate order of each edge's architecture vector.
enum class OpKind {
  kSepConv3x3,
  kSepConv5x5,
  kDilConv3x3,
  kDilConv5x5,
  kMaxPool3x3,
  kAvgPool3x3,
  kSkipConnect,
  kZero,
};

inline constexpr int kNumOps = 8;

inline constexpr std::array<OpKind, kNumOps> kAllOps{
    OpKind::kSepConv3x3, OpKind::kSepConv5x5, OpKind::kDilConv3x3,
    OpKind::kDilConv5x5, OpKind::kMaxPool3x3, OpKind::kAvgPool3x3,
    OpKind::kSkipConnect, OpKind::kZero};

inline constexpr int op_index(OpKind k) { return static_cast<int>(k); }

std::string_view op_name(OpKind k);
std::optional<OpKind> parse_op(std::string_view name);

/// Ops whose convolutions run through the approximate multiplier.
inline constexpr bool is_approximate_conv(OpKind k) {
  return k == OpKind::kSepConv3x3 || k == OpKind::kSepConv5x5 ||
         k == OpKind::kDilConv3x3 || k == OpKind::kDilConv5x5;
}

}  // namespace axnas::darts
