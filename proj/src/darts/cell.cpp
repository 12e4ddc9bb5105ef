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

#include "axnas/darts/cell.hpp"

#include <string>

#include "axnas/errors.hpp"

namespace axnas::darts {

SearchCell::SearchCell(const CellTopology& topo, const Shape& shape,
                       bool approx_preprocess, Rng& rng)
    : topo_(topo), shape_(shape) {
  // Candidate-op BNs carry no affine parameters during search.
  const bool affine = false;
  if (shape.reduction_prev) {
    pre0_ = register_module("pre0", std::make_unique<FactorizedReduce>(
                                        shape.c_prev_prev, shape.channels, affine,
                                        approx_preprocess, rng));
  } else {
    pre0_ = register_module("pre0", std::make_unique<ReluConvBn>(
                                        shape.c_prev_prev, shape.channels, affine,
                                        approx_preprocess, rng));
  }
  pre1_ = register_module("pre1", std::make_unique<ReluConvBn>(
                                      shape.c_prev, shape.channels, affine,
                                      approx_preprocess, rng));
  OpOptions opt;
  opt.affine = affine;
  opt.pool_bn = true;
  for (int e = 0; e < topo_.num_edges(); ++e) {
    const auto& edge = topo_.edges()[e];
    const int stride = shape.kind == CellKind::kReduction && edge.from < 2 ? 2 : 1;
    edges_.push_back(register_module("edge" + std::to_string(e),
                                     std::make_unique<MixedOp>(shape.channels, stride, opt, rng)));
  }
}

Tensor SearchCell::forward(const Tensor& s_prev2, const Tensor& s_prev,
                           std::span<const Tensor> weights, const ExecMode& mode) {
  if (weights.size() != static_cast<std::size_t>(topo_.num_edges())) {
    throw ShapeError("cell expects " + std::to_string(topo_.num_edges()) +
                     " edge weight vectors, got " + std::to_string(weights.size()));
  }
  std::vector<Tensor> states{pre0_->forward(s_prev2, mode), pre1_->forward(s_prev, mode)};
  for (int j = 0; j < topo_.intermediate_nodes(); ++j) {
    std::vector<Tensor> terms;
    for (int from = 0; from < j + 2; ++from) {
      const int e = topo_.edge_index(j, from);
      terms.push_back(edges_[e]->forward(states[from], weights[e], mode));
    }
    states.push_back(ops::add_n(terms));
  }
  return ops::concat_channels(std::vector<Tensor>(states.begin() + 2, states.end()));
}

std::vector<Tensor> edge_weights(const Tensor& alphas) {
  std::vector<Tensor> out;
  for (int e = 0; e < alphas.dim(0); ++e) out.push_back(ops::softmax(ops::select_row(alphas, e)));
  return out;
}

Tensor cell_forward(SearchCell& cell, const Tensor& s_prev2, const Tensor& s_prev,
                    const Tensor& alphas, const ExecMode& mode) {
  const auto w = edge_weights(alphas);
  return cell.forward(s_prev2, s_prev, w, mode);
}

}  // namespace axnas::darts
