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
#include <vector>

#include "axnas/darts/cell.hpp"

namespace axnas::darts {

struct NetworkShape {
  int cells = 8;
  int intermediate_nodes = 4;
  int init_channels = 16;
  int in_channels = 3;
  int num_classes = 10;
  int stem_multiplier = 3;
  /// Run the cell-preprocessing 1x1 convs through the multiplier too.
  bool approx_preprocess = false;
};

struct CellPlanEntry {
  int channels;  // per intermediate node
  bool reduction;
};

/// Reduction cells sit at floor(L/3) and floor(2L/3); channels double at
/// each. Throws ConfigError when cells < 3.
std::vector<CellPlanEntry> cell_plan(int cells, int init_channels);

/// Stem -> L search cells -> global average pool -> linear classifier.
class Supernet : public Module {
 public:
  Supernet(const NetworkShape& shape, Rng& rng);

  Tensor forward(const Tensor& x, const ArchParams& alphas, const ExecMode& mode);

  const NetworkShape& shape() const { return shape_; }
  const CellTopology& topology() const { return topo_; }
  const std::vector<SearchCell*>& cells() const { return cells_; }

 private:
  NetworkShape shape_;
  CellTopology topo_;
  Conv2d* stem_conv_;
  BatchNorm2d* stem_bn_;
  std::vector<SearchCell*> cells_;
  Linear* classifier_;
};

std::unique_ptr<Supernet> build_supernet(const NetworkShape& shape, Rng& rng);

}  // namespace axnas::darts
