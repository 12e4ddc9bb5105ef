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

#include "axnas/darts/mixed_op.hpp"

#include <string>

#include "axnas/errors.hpp"

namespace axnas::darts {

MixedOp::MixedOp(int channels, int stride, const OpOptions& opt, Rng& rng) {
  for (OpKind k : kAllOps) {
    ops_[op_index(k)] =
        register_module(std::string(op_name(k)), make_op(k, channels, stride, opt, rng));
  }
}

Tensor MixedOp::forward(const Tensor& x, const Tensor& weights, const ExecMode& mode) {
  if (weights.numel() != kNumOps) {
    throw ShapeError("mixed op expects " + std::to_string(kNumOps) + " weights");
  }
  std::vector<Tensor> outs;
  outs.reserve(kNumOps);
  for (CellOp* op : ops_) outs.push_back(op->forward(x, mode));
  return ops::weighted_sum(outs, weights);
}

Tensor mixed_op(const Tensor& x, const Tensor& edge_alphas, MixedOp& ops,
                const ExecMode& mode) {
  return ops.forward(x, ops::softmax(edge_alphas), mode);
}

}  // namespace axnas::darts
