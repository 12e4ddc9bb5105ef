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

#include "axnas/experiment/network.hpp"

#include <string>

#include "axnas/errors.hpp"
#include "axnas/experiment/augment.hpp"

namespace axnas::experiment {

using darts::CellKind;

EvalCell::EvalCell(const std::vector<std::vector<darts::GenotypeEdge>>& edges,
                   const std::vector<int>& concat, const darts::SearchCell::Shape& shape,
                   bool approx_preprocess, Rng& rng)
    : edges_(edges), concat_(concat), channels_(shape.channels) {
  if (shape.reduction_prev) {
    pre0_ = register_module("pre0", std::make_unique<darts::FactorizedReduce>(
                                        shape.c_prev_prev, shape.channels, true,
                                        approx_preprocess, rng));
  } else {
    pre0_ = register_module("pre0", std::make_unique<darts::ReluConvBn>(
                                        shape.c_prev_prev, shape.channels, true,
                                        approx_preprocess, rng));
  }
  pre1_ = register_module("pre1", std::make_unique<darts::ReluConvBn>(
                                      shape.c_prev, shape.channels, true, approx_preprocess, rng));
  darts::OpOptions opt;
  opt.affine = true;
  opt.pool_bn = false;
  int k = 0;
  for (std::size_t j = 0; j < edges_.size(); ++j) {
    for (const auto& e : edges_[j]) {
      const int stride = shape.kind == CellKind::kReduction && e.input < 2 ? 2 : 1;
      ops_.push_back(register_module("op" + std::to_string(k++),
                                     darts::make_op(e.op, shape.channels, stride, opt, rng)));
    }
  }
}

Tensor EvalCell::forward(const Tensor& s_prev2, const Tensor& s_prev, const ExecMode& mode,
                         const DropPath& dp) {
  std::vector<Tensor> states{pre0_->forward(s_prev2, mode), pre1_->forward(s_prev, mode)};
  std::size_t k = 0;
  for (const auto& node : edges_) {
    std::vector<Tensor> terms;
    for (const auto& e : node) {
      Tensor h = ops_[k++]->forward(states[e.input], mode);
      if (dp.rng != nullptr && dynamic_cast<darts::Identity*>(ops_[k - 1]) == nullptr) {
        h = drop_path(h, dp.prob, *dp.rng, is_training());
      }
      terms.push_back(h);
    }
    states.push_back(ops::add_n(terms));
  }
  std::vector<Tensor> out;
  for (int c : concat_) out.push_back(states[c]);
  return ops::concat_channels(out);
}

AuxHead::AuxHead(int c_in, int channels, int hidden, int num_classes, Rng& rng) {
  conv1_ = register_module("conv1", std::make_unique<Conv2d>(c_in, channels, 1,
                                                             ops::Conv2dOptions{}, rng));
  bn1_ = register_module("bn1", std::make_unique<BatchNorm2d>(channels, true));
  conv2_ = register_module("conv2", std::make_unique<Conv2d>(channels, hidden, 2,
                                                             ops::Conv2dOptions{}, rng));
  bn2_ = register_module("bn2", std::make_unique<BatchNorm2d>(hidden, true));
  fc_ = register_module("fc", std::make_unique<Linear>(hidden, num_classes, rng));
}

Tensor AuxHead::forward(const Tensor& x) {
  const int H = x.dim(2);
  if (H < 2 || x.dim(3) != H) {
    throw ShapeError("auxiliary head needs a square feature map of side >= 2, got " +
                     std::to_string(H) + "x" + std::to_string(x.dim(3)));
  }
  // Window and stride chosen so the pooled map is always 2x2.
  const int stride = H / 2;
  const int kernel = H - stride;
  const ExecMode exact = Fp32Exact{};
  Tensor h = ops::avg_pool2d(ops::relu(x), kernel, stride, 0);
  h = ops::relu(bn1_->forward(conv1_->forward(h, exact)));
  h = ops::relu(bn2_->forward(conv2_->forward(h, exact)));
  return fc_->forward(ops::flatten(h));
}

EvalNetwork::EvalNetwork(const darts::Genotype& genotype, const EvalShape& shape, Rng& rng)
    : shape_(shape) {
  genotype.validate();
  const auto plan = darts::cell_plan(shape.cells, shape.init_channels);
  const int stem_c = shape.stem_multiplier * shape.init_channels;
  ops::Conv2dOptions stem_opt;
  stem_opt.padding = 1;
  stem_conv_ = register_module(
      "stem_conv", std::make_unique<Conv2d>(shape.in_channels, stem_c, 3, stem_opt, rng));
  stem_bn_ = register_module("stem_bn", std::make_unique<BatchNorm2d>(stem_c, true));
  int c_pp = stem_c, c_p = stem_c;
  bool reduction_prev = false;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const bool red = plan[i].reduction;
    darts::SearchCell::Shape cs{c_pp, c_p, plan[i].channels,
                                red ? CellKind::kReduction : CellKind::kNormal, reduction_prev};
    auto* cell = register_module(
        "cell" + std::to_string(i),
        std::make_unique<EvalCell>(red ? genotype.reduce : genotype.normal, genotype.concat, cs,
                                   shape.approx_preprocess, rng));
    cells_.push_back(cell);
    c_pp = c_p;
    c_p = cell->out_channels();
    reduction_prev = red;
    if (shape.auxiliary && static_cast<int>(i) == aux_position()) {
      aux_ = register_module("aux", std::make_unique<AuxHead>(c_p, shape.aux_channels,
                                                              shape.aux_hidden,
                                                              shape.num_classes, rng));
    }
  }
  classifier_ =
      register_module("classifier", std::make_unique<Linear>(c_p, shape.num_classes, rng));
}

EvalNetwork::Output EvalNetwork::forward(const Tensor& x, const ExecMode& mode,
                                         const DropPath& dp) {
  Output out;
  Tensor s0 = stem_bn_->forward(stem_conv_->forward(x, mode));
  Tensor s1 = s0;
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    Tensor next = cells_[i]->forward(s0, s1, mode, dp);
    s0 = s1;
    s1 = next;
    if (aux_ != nullptr && is_training() && static_cast<int>(i) == aux_position()) {
      out.aux = aux_->forward(s1);
    }
  }
  out.logits = classifier_->forward(ops::global_avg_pool(s1));
  return out;
}

}  // namespace axnas::experiment
