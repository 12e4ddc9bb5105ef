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
#include <optional>
#include <vector>

#include "axnas/darts/candidate_ops.hpp"
#include "axnas/darts/cell.hpp"
#include "axnas/darts/genotype.hpp"
#include "axnas/darts/supernet.hpp"

namespace axnas::experiment {

struct EvalShape {
  int cells = 20;
  int init_channels = 32;
  int in_channels = 3;
  int num_classes = 10;
  int stem_multiplier = 3;
  bool approx_preprocess = false;
  bool auxiliary = true;
  int aux_channels = 128;
  int aux_hidden = 768;
};

/// Drop-path settings for one forward pass; disabled when rng is null.
struct DropPath {
  double prob = 0.0;
  Rng* rng = nullptr;
};

/// A discrete cell: the two retained ops per node from a genotype.
class EvalCell : public Module {
 public:
  EvalCell(const std::vector<std::vector<darts::GenotypeEdge>>& edges,
           const std::vector<int>& concat, const darts::SearchCell::Shape& shape,
           bool approx_preprocess, Rng& rng);
  Tensor forward(const Tensor& s_prev2, const Tensor& s_prev, const ExecMode& mode,
                 const DropPath& dp);
  int out_channels() const { return static_cast<int>(concat_.size()) * channels_; }

 private:
  std::vector<std::vector<darts::GenotypeEdge>> edges_;
  std::vector<int> concat_;
  int channels_;
  darts::CellOp* pre0_;
  darts::CellOp* pre1_;
  std::vector<darts::CellOp*> ops_;  // node-major, two per node
};

/// ReLU -> avg pool to 2x2 -> 1x1 conv -> BN -> ReLU -> 2x2 conv -> BN ->
/// ReLU -> linear. Runs in real arithmetic regardless of mode.
class AuxHead : public Module {
 public:
  AuxHead(int c_in, int channels, int hidden, int num_classes, Rng& rng);
  Tensor forward(const Tensor& x);

 private:
  Conv2d* conv1_;
  BatchNorm2d* bn1_;
  Conv2d* conv2_;
  BatchNorm2d* bn2_;
  Linear* fc_;
};

/// Stem -> L discrete cells -> global average pool -> linear, with an
/// optional auxiliary head after cell floor(2L/3).
class EvalNetwork : public Module {
 public:
  struct Output {
    Tensor logits;
    std::optional<Tensor> aux;  // training mode with auxiliary head only
  };

  EvalNetwork(const darts::Genotype& genotype, const EvalShape& shape, Rng& rng);
  Output forward(const Tensor& x, const ExecMode& mode, const DropPath& dp = {});
  const EvalShape& shape() const { return shape_; }
  int aux_position() const { return static_cast<int>(2 * shape_.cells / 3); }

 private:
  EvalShape shape_;
  Conv2d* stem_conv_;
  BatchNorm2d* stem_bn_;
  std::vector<EvalCell*> cells_;
  AuxHead* aux_ = nullptr;
  Linear* classifier_;
};

}  // namespace axnas::experiment
