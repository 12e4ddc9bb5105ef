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

#include "axnas/tensor/tensor.hpp"

namespace axnas::optim {

/// Classical momentum with L2 weight decay folded into the gradient:
///   d = g + wd * w;  v = momentum * v + d;  w -= lr * v
void sgd_step(std::span<double> param, std::span<const double> grad,
              std::span<double> velocity, double lr, double momentum,
              double weight_decay);

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long step = 0;
};

/// Adam with bias correction and L2 weight decay folded into the gradient.
void adam_step(std::span<double> param, std::span<const double> grad,
               AdamState& state, double lr, double beta1, double beta2,
               double weight_decay, double eps);

/// lr0 * 0.5 * (1 + cos(pi * epoch / total_epochs))
double cosine_lr(int epoch, int total_epochs, double lr0);

/// Rescales all gradients so their joint L2 norm is at most `max_norm`.
/// Returns the norm before clipping. `max_norm <= 0` disables clipping.
double clip_grad_norm(std::vector<Tensor>& params, double max_norm);

class Sgd {
 public:
  struct Options {
    double momentum = 0.9;
    double weight_decay = 3e-4;
  };
  Sgd(std::vector<Tensor> params, Options opt);
  void step(double lr);
  void zero_grad();
  std::vector<Tensor>& params() { return params_; }

 private:
  std::vector<Tensor> params_;
  std::vector<std::vector<double>> velocity_;
  Options opt_;
};

class Adam {
 public:
  struct Options {
    double lr = 1e-4;
    double beta1 = 0.5;
    double beta2 = 0.999;
    double weight_decay = 1e-3;
    double eps = 1e-8;
  };
  Adam(std::vector<Tensor> params, Options opt);
  void step();
  void zero_grad();
  std::vector<Tensor>& params() { return params_; }

 private:
  std::vector<Tensor> params_;
  std::vector<AdamState> state_;
  Options opt_;
};

}  // namespace axnas::optim
