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

#include "axnas/experiment/macs.hpp"

#include "axnas/experiment/network.hpp"

namespace axnas::experiment {
namespace {

std::uint64_t numel(const Shape& s) {
  std::uint64_t n = 1;
  for (int d : s) n *= static_cast<std::uint64_t>(d);
  return n;
}

}  // namespace

LayerCount count_layer(const profile::LayerRecord& rec) {
  using profile::LayerKind;
  LayerCount c{rec.kind, false, 0};
  switch (rec.kind) {
    case LayerKind::kConv:
      // weight is (out_c, in_c / groups, kh, kw)
      c.ops = numel(rec.output) * static_cast<std::uint64_t>(rec.weight[1]) * rec.weight[2] *
              rec.weight[3];
      c.approximable = rec.approximable;
      break;
    case LayerKind::kLinear:
      c.ops = numel(rec.weight) * static_cast<std::uint64_t>(rec.input[0]);
      break;
    case LayerKind::kBatchNorm:
      c.ops = kBatchNormFlops * numel(rec.output);
      break;
    case LayerKind::kRelu:
      c.ops = kReluFlops * numel(rec.output);
      break;
    case LayerKind::kMaxPool:
    case LayerKind::kAvgPool:
      c.ops = static_cast<std::uint64_t>(rec.window) * numel(rec.output);
      break;
    case LayerKind::kAdd:
      c.ops = static_cast<std::uint64_t>(rec.window - 1) * numel(rec.output);
      break;
    case LayerKind::kGlobalAvgPool:
      c.ops = numel(rec.input);
      break;
  }
  return c;
}

MacCounts count_macs(std::span<const profile::LayerRecord> records) {
  MacCounts out;
  for (const auto& rec : records) {
    LayerCount c = count_layer(rec);
    (c.approximable ? out.approx_macs : out.exact_flops) += c.ops;
    out.layers.push_back(c);
  }
  return out;
}

MacCounts count_macs(EvalNetwork& net, int channels, int height, int width) {
  const bool was_training = net.is_training();
  net.eval();
  MacCounts counts;
  {
    NoGradGuard no_grad;
    profile::LayerRecorder recorder;
    net.forward(Tensor::zeros({1, channels, height, width}), Fp32Exact{});
    counts = count_macs(recorder.records());
  }
  net.train(was_training);
  return counts;
}

nlohmann::json mac_counts_to_json(const MacCounts& c) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& l : c.layers) {
    layers.push_back({{"kind", profile::layer_kind_name(l.kind)},
                      {"approximable", l.approximable},
                      {"ops", l.ops}});
  }
  return {{"approx_macs", c.approx_macs}, {"exact_flops", c.exact_flops}, {"layers", layers}};
}

}  // namespace axnas::experiment
