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

#include "axnas/experiment/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>

#include "axnas/errors.hpp"
#include "axnas/experiment/augment.hpp"

namespace axnas::experiment {
namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <typename Forward>
Evaluation evaluate_with(std::span<const darts::Batch> batches, Forward&& forward) {
  NoGradGuard no_grad;
  Evaluation ev;
  std::size_t n = 0, correct = 0;
  for (const auto& b : batches) {
    Tensor logits = forward(b.images);
    ev.loss += ops::softmax_cross_entropy(logits, b.labels).item() * b.labels.size();
    const auto pred = ops::argmax_rows(logits);
    for (std::size_t i = 0; i < pred.size(); ++i) correct += pred[i] == b.labels[i];
    n += b.labels.size();
  }
  if (n > 0) {
    ev.loss /= static_cast<double>(n);
    ev.accuracy = 100.0 * static_cast<double>(correct) / static_cast<double>(n);
  }
  return ev;
}

std::vector<std::size_t> iota_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  return idx;
}

}  // namespace

void write_log(const std::vector<LogRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot write log");
  out << "epoch,train_loss,val_loss,val_acc,lr,seconds\n";
  char line[256];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%d,%.6f,%.6f,%.2f,%.6g,%.3f\n", r.epoch, r.train_loss,
                  r.val_loss, r.val_acc, r.lr, r.seconds);
    out << line;
  }
}

Evaluation evaluate(EvalNetwork& net, std::span<const darts::Batch> batches,
                    const ExecMode& mode) {
  const bool was_training = net.is_training();
  net.eval();
  auto ev = evaluate_with(batches, [&](const Tensor& x) { return net.forward(x, mode).logits; });
  net.train(was_training);
  return ev;
}

Evaluation evaluate(darts::Supernet& net, const darts::ArchParams& alphas,
                    std::span<const darts::Batch> batches, const ExecMode& mode) {
  const bool was_training = net.is_training();
  net.eval();
  auto ev = evaluate_with(batches, [&](const Tensor& x) { return net.forward(x, alphas, mode); });
  net.train(was_training);
  return ev;
}

SearchResult run_search(const SearchConfig& cfg, const DataSplits& data) {
  cfg.validate();
  const auto t0 = Clock::now();
  const std::size_t n = data.train.size();
  const std::size_t half = n / 2;
  if (half < static_cast<std::size_t>(cfg.batch_size)) {
    throw DataError("dataset too small for the batch size: " + std::to_string(n) +
                    " training samples give halves of " + std::to_string(half) +
                    ", batch_size is " + std::to_string(cfg.batch_size));
  }
  const auto order = shuffled_indices(n, cfg.seed, 0);
  const Dataset w_half = data.train.subset(std::span(order).first(half));
  const Dataset a_half = data.train.subset(std::span(order).subspan(half));
  const auto a_batches = make_batches(a_half, iota_indices(a_half.size()), cfg.batch_size);

  Rng rng(cfg.seed);
  darts::NetworkShape shape;
  shape.cells = cfg.cells;
  shape.intermediate_nodes = cfg.intermediate_nodes;
  shape.init_channels = cfg.init_channels;
  shape.in_channels = data.train.channels;
  shape.num_classes = data.train.num_classes;
  shape.stem_multiplier = cfg.stem_multiplier;
  shape.approx_preprocess = cfg.approx_preprocess;
  auto net = darts::build_supernet(shape, rng);
  SearchResult res;
  res.final_alphas = darts::ArchParams::init(net->topology(), rng);
  res.initial_alphas = res.final_alphas.clone();

  optim::Sgd w_opt(net->parameters(), {cfg.w_opt.momentum, cfg.w_opt.weight_decay});
  optim::Adam a_opt(res.final_alphas.tensors(),
                    {cfg.a_opt.lr, cfg.a_opt.beta1, cfg.a_opt.beta2, cfg.a_opt.weight_decay, 1e-8});
  darts::BilevelOptions bo{cfg.epochs, cfg.warmup_epochs, cfg.w_opt.lr0, cfg.w_opt.grad_clip};

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto te = Clock::now();
    const auto perm = shuffled_indices(w_half.size(), cfg.seed, 1 + epoch);
    const auto w_batches = make_batches(w_half, perm, cfg.batch_size);
    const auto st = darts::bilevel_epoch(*net, res.final_alphas, w_batches, a_batches, w_opt,
                                         a_opt, epoch, bo, cfg.mode);
    const auto ev = evaluate(*net, res.final_alphas, a_batches, cfg.mode);
    res.log.push_back({epoch, st.train_loss, ev.loss, ev.accuracy, st.lr, since(te)});
  }
  res.genotype = darts::derive_genotype(res.final_alphas);
  res.seconds = since(t0);
  return res;
}

EvalShape eval_shape(const EvalConfig& cfg, const Dataset& train) {
  EvalShape s;
  s.cells = cfg.cells;
  s.init_channels = cfg.init_channels;
  s.in_channels = train.channels;
  s.num_classes = train.num_classes;
  s.stem_multiplier = cfg.stem_multiplier;
  s.approx_preprocess = cfg.approx_preprocess;
  s.auxiliary = cfg.aux_weight > 0.0;
  s.aux_channels = cfg.aux_channels;
  s.aux_hidden = cfg.aux_hidden;
  return s;
}

Tensor eval_training_loss(EvalNetwork& net, const darts::Batch& batch, const EvalConfig& cfg,
                          double drop_prob, Rng& rng) {
  Tensor images = batch.images;
  if (cfg.cutout_size > 0) {
    const int N = images.dim(0), C = images.dim(1), H = images.dim(2), W = images.dim(3);
    std::vector<double> px(images.data().begin(), images.data().end());
    const std::size_t per = static_cast<std::size_t>(C) * H * W;
    for (int i = 0; i < N; ++i) {
      cutout(std::span(px).subspan(i * per, per), C, H, W, cfg.cutout_size, rng);
    }
    images = Tensor::from_data(images.shape(), std::move(px));
  }
  auto out = net.forward(images, cfg.mode, DropPath{drop_prob, &rng});
  Tensor loss = ops::softmax_cross_entropy(out.logits, batch.labels);
  if (out.aux && cfg.aux_weight > 0.0) {
    loss = ops::add(loss, ops::scale(ops::softmax_cross_entropy(*out.aux, batch.labels),
                                     cfg.aux_weight));
  }
  return loss;
}

EvalResult run_eval(const darts::Genotype& genotype, const EvalConfig& cfg,
                    const DataSplits& data) {
  cfg.validate();
  const auto t0 = Clock::now();
  if (data.train.size() == 0) throw DataError("run_eval: empty training set");
  Rng rng(cfg.seed);
  EvalResult res;
  res.network = std::make_unique<EvalNetwork>(genotype, eval_shape(cfg, data.train), rng);
  EvalNetwork& net = *res.network;
  res.parameters = net.num_parameters();
  auto params = net.parameters();
  optim::Sgd opt(params, {cfg.w_opt.momentum, cfg.w_opt.weight_decay});
  const auto test_batches = make_batches(data.test, iota_indices(data.test.size()), cfg.batch_size);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto te = Clock::now();
    net.train();
    const double lr = optim::cosine_lr(epoch, cfg.epochs, cfg.w_opt.lr0);
    // Drop probability ramps linearly over training.
    const double drop_prob = cfg.drop_path_prob * epoch / cfg.epochs;
    const auto perm = shuffled_indices(data.train.size(), cfg.seed, 1 + epoch);
    const auto batches = make_batches(data.train, perm, cfg.batch_size);
    double train_loss = 0.0;
    for (const auto& b : batches) {
      opt.zero_grad();
      Tensor loss = eval_training_loss(net, b, cfg, drop_prob, rng);
      loss.backward();
      optim::clip_grad_norm(params, cfg.w_opt.grad_clip);
      opt.step(lr);
      train_loss += loss.item();
    }
    const auto ev = evaluate(net, test_batches, cfg.mode);
    res.log.push_back({epoch, train_loss / batches.size(), ev.loss, ev.accuracy, lr, since(te)});
    res.test_accuracy = ev.accuracy;
  }
  res.seconds = since(t0);
  return res;
}

}  // namespace axnas::experiment
