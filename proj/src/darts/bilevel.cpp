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

#include "axnas/darts/bilevel.hpp"

#include "axnas/errors.hpp"

namespace axnas::darts {
namespace {

void set_requires_grad(std::vector<Tensor>& ts, bool on) {
  for (auto& t : ts) t.set_requires_grad(on);
}

}  // namespace

EpochStats bilevel_epoch(Supernet& net, ArchParams& alphas,
                         std::span<const Batch> train_half,
                         std::span<const Batch> val_half, optim::Sgd& w_opt,
                         optim::Adam& a_opt, int epoch, const BilevelOptions& opt,
                         const ExecMode& mode) {
  if (train_half.empty()) throw DataError("bilevel_epoch: empty training split");
  const bool update_arch = epoch >= opt.warmup_epochs;
  if (update_arch && val_half.empty()) {
    throw DataError("bilevel_epoch: empty validation split");
  }
  net.train();
  EpochStats stats;
  stats.lr = optim::cosine_lr(epoch, opt.total_epochs, opt.w_lr0);
  auto& weights = w_opt.params();
  auto arch = alphas.tensors();

  for (std::size_t i = 0; i < train_half.size(); ++i) {
    if (update_arch) {
      const Batch& vb = val_half[i % val_half.size()];
      set_requires_grad(weights, false);
      a_opt.zero_grad();
      Tensor loss = ops::softmax_cross_entropy(net.forward(vb.images, alphas, mode), vb.labels);
      loss.backward();
      a_opt.step();
      set_requires_grad(weights, true);
      stats.arch_loss += loss.item();
      ++stats.arch_steps;
    }
    const Batch& tb = train_half[i];
    set_requires_grad(arch, false);
    w_opt.zero_grad();
    Tensor loss = ops::softmax_cross_entropy(net.forward(tb.images, alphas, mode), tb.labels);
    loss.backward();
    optim::clip_grad_norm(weights, opt.grad_clip);
    w_opt.step(stats.lr);
    set_requires_grad(arch, true);
    stats.train_loss += loss.item();
    ++stats.weight_steps;
  }
  stats.train_loss /= stats.weight_steps;
  if (stats.arch_steps > 0) stats.arch_loss /= stats.arch_steps;
  return stats;
}

}  // namespace axnas::darts
