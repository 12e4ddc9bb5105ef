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
#include <memory>

#include "axnas/darts/candidate_ops.hpp"

namespace axnas::darts {

/// All kNumOps candidate operations of one edge.
class MixedOp : public Module {
 public:
  MixedOp(int channels, int stride, const OpOptions& opt, Rng& rng);

  /// sum_o weights[o] * o(x), with `weights` already normalized.
  Tensor forward(const Tensor& x, const Tensor& weights, const ExecMode& mode);
  CellOp& op(OpKind k) { return *ops_[op_index(k)]; }

 private:
  std::array<CellOp*, kNumOps> ops_{};
};

/// Softmax-relaxed edge: softmax(edge_alphas) weighted sum of the ops.
Tensor mixed_op(const Tensor& x, const Tensor& edge_alphas, MixedOp& ops,
                const ExecMode& mode);

}  // namespace axnas::darts
