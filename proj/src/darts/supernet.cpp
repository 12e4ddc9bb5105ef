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

#include "axnas/darts/supernet.hpp"

#include <string>

#include "axnas/errors.hpp"

namespace axnas::darts {

std::vector<CellPlanEntry> cell_plan(int cells, int init_channels) {
  if (cells < 3) throw ConfigError("cells must be >= 3, got " + std::to_string(cells));
  if (init_channels < 1) throw ConfigError("init_channels must be >= 1");
  std::vector<CellPlanEntry> plan;
  int c = init_channels;
  for (int i = 0; i < cells; ++i) {
    const bool reduction = i == cells / 3 || i == 2 * cells / 3;
    if (reduction) c *= 2;
    plan.push_back({c, reduction});
  }
  return plan;
}

Supernet::Supernet(const NetworkShape& shape, Rng& rng)
    : shape_(shape), topo_(shape.intermediate_nodes) {
  const auto plan = cell_plan(shape.cells, shape.init_channels);
  const int stem_c = shape.stem_multiplier * shape.init_channels;
  ops::Conv2dOptions stem_opt;
  stem_opt.padding = 1;
  stem_conv_ = register_module("stem_conv",
                               std::make_unique<Conv2d>(shape.in_channels, stem_c, 3, stem_opt, rng));
  stem_bn_ = register_module("stem_bn", std::make_unique<BatchNorm2d>(stem_c, true));
  int c_pp = stem_c, c_p = stem_c;
  bool reduction_prev = false;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    SearchCell::Shape cs{c_pp, c_p, plan[i].channels,
                         plan[i].reduction ? CellKind::kReduction : CellKind::kNormal,
                         reduction_prev};
    auto* cell = register_module("cell" + std::to_string(i),
                                 std::make_unique<SearchCell>(topo_, cs, shape.approx_preprocess, rng));
    cells_.push_back(cell);
    c_pp = c_p;
    c_p = cell->out_channels();
    reduction_prev = plan[i].reduction;
  }
  classifier_ = register_module("classifier", std::make_unique<Linear>(c_p, shape.num_classes, rng));
}

Tensor Supernet::forward(const Tensor& x, const ArchParams& alphas, const ExecMode& mode) {
  const auto w_normal = edge_weights(alphas.normal);
  const auto w_reduce = edge_weights(alphas.reduce);
  Tensor s0 = stem_bn_->forward(stem_conv_->forward(x, mode));
  Tensor s1 = s0;
  for (SearchCell* cell : cells_) {
    const auto& w = cell->kind() == CellKind::kReduction ? w_reduce : w_normal;
    Tensor next = cell->forward(s0, s1, w, mode);
    s0 = s1;
    s1 = next;
  }
  return classifier_->forward(ops::global_avg_pool(s1));
}

std::unique_ptr<Supernet> build_supernet(const NetworkShape& shape, Rng& rng) {
  return std::make_unique<Supernet>(shape, rng);
}

}  // namespace axnas::darts
