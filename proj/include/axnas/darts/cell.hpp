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

#include <memory>
#include <span>
#include <vector>

#include "axnas/darts/mixed_op.hpp"
#include "axnas/darts/topology.hpp"

namespace axnas::darts {

enum class CellKind { kNormal, kReduction };

/// Preprocessing plus one MixedOp per edge.
class SearchCell : public Module {
 public:
  struct Shape {
    int c_prev_prev;
    int c_prev;
    int channels;  // per intermediate node
    CellKind kind;
    bool reduction_prev;
  };

  SearchCell(const CellTopology& topo, const Shape& shape, bool approx_preprocess,
             Rng& rng);

  /// `edge_weights[e]` is the normalized weight vector of edge e.
  Tensor forward(const Tensor& s_prev2, const Tensor& s_prev,
                 std::span<const Tensor> edge_weights, const ExecMode& mode);

  int out_channels() const { return topo_.intermediate_nodes() * shape_.channels; }
  CellKind kind() const { return shape_.kind; }

 private:
  CellTopology topo_;
  Shape shape_;
  CellOp* pre0_;
  CellOp* pre1_;
  std::vector<MixedOp*> edges_;
};

/// Normalized per-edge weights (softmax of each alpha row).
std::vector<Tensor> edge_weights(const Tensor& alphas);

/// One cell forward pass driven directly by its alpha matrix.
Tensor cell_forward(SearchCell& cell, const Tensor& s_prev2, const Tensor& s_prev,
                    const Tensor& alphas, const ExecMode& mode);

}  // namespace axnas::darts
