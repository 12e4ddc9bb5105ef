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

#include <span>
#include <vector>

#include "axnas/darts/supernet.hpp"
#include "axnas/tensor/optim.hpp"

namespace axnas::darts {

/// A mini-batch of NCHW images with integer class labels.
struct Batch {
  Tensor images;
  std::vector<int> labels;
};

struct BilevelOptions {
  int total_epochs = 50;
  int warmup_epochs = 15;  // weight-only epochs before alpha updates begin
  double w_lr0 = 0.1;      // cosine-annealed to 0 over total_epochs
  double grad_clip = 5.0;  // <= 0 disables
};

struct EpochStats {
  double train_loss = 0.0;  // mean over weight steps
  double arch_loss = 0.0;   // mean over alpha steps (0 during warmup)
  double lr = 0.0;
  int weight_steps = 0;
  int arch_steps = 0;
};

/// One epoch of first-order alternating optimization. For each training
/// batch i: if epoch >= warmup, one Adam step on alpha against validation
/// batch i (mod the validation count) with weights frozen; then one SGD
/// step on the weights with alpha frozen.
EpochStats bilevel_epoch(Supernet& net, ArchParams& alphas,
                         std::span<const Batch> train_half,
                         std::span<const Batch> val_half, optim::Sgd& w_opt,
                         optim::Adam& a_opt, int epoch, const BilevelOptions& opt,
                         const ExecMode& mode);

}  // namespace axnas::darts
