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

#include "axnas/tensor/profile.hpp"

#include "axnas/tensor/exec_mode.hpp"

namespace axnas {

std::string mode_name(const ExecMode& mode) {
  if (const auto* q = std::get_if<Quant8>(&mode)) return q->multiplier->name();
  return "fp32";
}

namespace profile {
namespace {
thread_local KernelCounters* g_counters = nullptr;
thread_local LayerRecorder* g_recorder = nullptr;
}  // namespace

KernelCounters* active_counters() { return g_counters; }

CounterScope::CounterScope() : previous_(g_counters) { g_counters = &counters_; }
CounterScope::~CounterScope() { g_counters = previous_; }

const char* layer_kind_name(LayerKind kind) {
  switch (kind) {
    case LayerKind::kConv: return "conv";
    case LayerKind::kLinear: return "linear";
    case LayerKind::kBatchNorm: return "batchnorm";
    case LayerKind::kMaxPool: return "max_pool";
    case LayerKind::kAvgPool: return "avg_pool";
    case LayerKind::kGlobalAvgPool: return "global_avg_pool";
    case LayerKind::kRelu: return "relu";
    case LayerKind::kAdd: return "add";
  }
  return "?";
}

LayerRecorder::LayerRecorder() : previous_(g_recorder) { g_recorder = this; }
LayerRecorder::~LayerRecorder() { g_recorder = previous_; }

void record(LayerRecord rec) {
  if (g_recorder != nullptr) g_recorder->records_.push_back(std::move(rec));
}

bool recording() { return g_recorder != nullptr; }

}  // namespace profile
}  // namespace axnas
