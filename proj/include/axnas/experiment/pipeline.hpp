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

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "axnas/darts/bilevel.hpp"
#include "axnas/darts/genotype.hpp"
#include "axnas/experiment/config.hpp"
#include "axnas/experiment/dataset.hpp"
#include "axnas/experiment/network.hpp"

namespace axnas::experiment {

struct LogRow {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_acc = 0.0;  // percent
  double lr = 0.0;
  double seconds = 0.0;
};

/// CSV with header epoch,train_loss,val_loss,val_acc,lr,seconds.
void write_log(const std::vector<LogRow>& rows, const std::filesystem::path& path);

struct SearchResult {
  darts::Genotype genotype;
  darts::ArchParams initial_alphas;
  darts::ArchParams final_alphas;
  std::vector<LogRow> log;
  double seconds = 0.0;
};

/// Splits the training set 50/50 into weight and architecture halves and
/// runs cfg.epochs bilevel epochs. Throws DataError when a half holds
/// fewer samples than one batch.
SearchResult run_search(const SearchConfig& cfg, const DataSplits& data);

struct EvalResult {
  std::unique_ptr<EvalNetwork> network;
  double test_accuracy = 0.0;  // percent
  std::size_t parameters = 0;
  std::vector<LogRow> log;
  double seconds = 0.0;
};

EvalShape eval_shape(const EvalConfig& cfg, const Dataset& train);

/// Trains the discrete network from scratch on the full training set and
/// reports accuracy on the test set.
EvalResult run_eval(const darts::Genotype& genotype, const EvalConfig& cfg,
                    const DataSplits& data);

/// The training objective for one batch: cutout on a copy of the images,
/// drop path at `drop_prob`, and the auxiliary loss weighted by
/// cfg.aux_weight.
Tensor eval_training_loss(EvalNetwork& net, const darts::Batch& batch, const EvalConfig& cfg,
                          double drop_prob, Rng& rng);

/// Mean loss and accuracy (percent) in eval mode, without gradients.
struct Evaluation {
  double loss = 0.0;
  double accuracy = 0.0;
};
Evaluation evaluate(EvalNetwork& net, std::span<const darts::Batch> batches,
                    const ExecMode& mode);
Evaluation evaluate(darts::Supernet& net, const darts::ArchParams& alphas,
                    std::span<const darts::Batch> batches, const ExecMode& mode);

}  // namespace axnas::experiment
