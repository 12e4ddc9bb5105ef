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

#include <random>

#include "axnas/darts/op_kind.hpp"
#include "axnas/tensor/ops.hpp"

namespace axnas::testing {

struct SteResult {
  bool forward_differs = false;  // the quant8 forward really changed something
  bool grads_equal = false;      // every compared gradient bit-equal
};

/// One convolution run in fp32 and in quant8 (trunc_3) with identical
/// inputs and upstream gradient; compares input and weight gradients.
SteResult conv_ste(std::mt19937_64& rng, const Shape& xs, const Shape& ws,
                   const ops::Conv2dOptions& opt);

/// The depthwise, pointwise and dense geometries used by the candidate ops.
SteResult conv_ste_geometries(std::mt19937_64& rng);

/// A whole sep_conv or dil_conv op (inference-mode BN) run in both modes;
/// compares the input gradient. For sep_conv the first BN shift is raised
/// so the middle ReLU passes everything in both modes; the backward then
/// involves no forward values.
SteResult module_ste(darts::OpKind kind, std::uint64_t seed);

}  // namespace axnas::testing
