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
#include <string>
#include <vector>

#include "axnas/tensor/tensor.hpp"

namespace axnas::profile {

/// Counters incremented from inside the arithmetic kernels. They count
/// the multiplications actually executed, one per loop iteration.
struct KernelCounters {
  std::uint64_t lut_lookups = 0;     // quant8 convolution products
  std::uint64_t real_conv_macs = 0;  // real-arithmetic convolution products
};

/// Thread-local counters; enabled only while a CounterScope is alive.
KernelCounters* active_counters();

class CounterScope {
 public:
  CounterScope();
  ~CounterScope();
  CounterScope(const CounterScope&) = delete;
  CounterScope& operator=(const CounterScope&) = delete;
  const KernelCounters& counters() const { return counters_; }

 private:
  KernelCounters counters_;
  KernelCounters* previous_;
};

enum class LayerKind {
  kConv,
  kLinear,
  kBatchNorm,
  kMaxPool,
  kAvgPool,
  kGlobalAvgPool,
  kRelu,
  kAdd,
};

const char* layer_kind_name(LayerKind kind);

/// Shape-level description of one executed layer, recorded by the ops
/// (not the kernels) while a LayerRecorder is alive.
struct LayerRecord {
  LayerKind kind;
  Shape input;
  Shape output;
  Shape weight;  // conv: (out_c, in_c / groups, kh, kw); linear: (out, in)
  int groups = 1;
  int window = 0;  // pooling window size (kh * kw)
  bool approximable = false;
};

class LayerRecorder {
 public:
  LayerRecorder();
  ~LayerRecorder();
  LayerRecorder(const LayerRecorder&) = delete;
  LayerRecorder& operator=(const LayerRecorder&) = delete;
  const std::vector<LayerRecord>& records() const { return records_; }

 private:
  friend void record(LayerRecord);
  std::vector<LayerRecord> records_;
  LayerRecorder* previous_;
};

/// Appends to the innermost live recorder, if any.
void record(LayerRecord rec);
bool recording();

}  // namespace axnas::profile
