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
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "axnas/tensor/profile.hpp"

namespace axnas::experiment {

class EvalNetwork;

// Exact-FLOP constants for non-convolution layers, per output element
// unless noted: batch norm 2 (scale and shift), ReLU 1, pooling one per
// window cell, n-way add n - 1, global average pooling 1 per input element.
inline constexpr std::uint64_t kBatchNormFlops = 2;
inline constexpr std::uint64_t kReluFlops = 1;

struct LayerCount {
  profile::LayerKind kind;
  bool approximable = false;
  std::uint64_t ops = 0;  // MACs for conv/linear, FLOPs otherwise
};

struct MacCounts {
  std::uint64_t approx_macs = 0;  // convolutions eligible for the multiplier
  std::uint64_t exact_flops = 0;  // everything else, priced at the FP32 rate
  std::vector<LayerCount> layers;

  std::uint64_t total() const { return approx_macs + exact_flops; }
};

/// Ops of one recorded layer (including its batch dimension).
LayerCount count_layer(const profile::LayerRecord& rec);
MacCounts count_macs(std::span<const profile::LayerRecord> records);

/// Records one batch-1 inference of `net` on an input of the given
/// channels and spatial size and counts its ops. Classification into
/// approximable and exact does not depend on the execution mode.
MacCounts count_macs(EvalNetwork& net, int channels, int height, int width);

nlohmann::json mac_counts_to_json(const MacCounts& c);

}  // namespace axnas::experiment
