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
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "axnas/tensor/exec_mode.hpp"
#include "axnas/tensor/ops.hpp"
#include "axnas/tensor/tensor.hpp"

namespace axnas {

using NamedTensor = std::pair<std::string, Tensor>;
using Rng = std::mt19937_64;

/// Owner of named parameters, buffers and child modules.
class Module {
 public:
  Module() = default;
  virtual ~Module() = default;
  Module(const Module&) = delete;
  Module& operator=(const Module&) = delete;

  /// Parameters in registration order, names dotted by child path.
  std::vector<NamedTensor> named_parameters() const;
  std::vector<Tensor> parameters() const;
  /// Non-trainable state (batch-norm running statistics).
  std::vector<NamedTensor> named_buffers() const;
  std::size_t num_parameters() const;

  void train(bool on = true);
  void eval() { train(false); }
  bool is_training() const { return training_; }

 protected:
  Tensor register_parameter(std::string name, Tensor t);
  Tensor register_buffer(std::string name, Tensor t);

  template <typename M>
  M* register_module(std::string name, std::unique_ptr<M> m) {
    M* raw = m.get();
    children_.emplace_back(std::move(name), std::move(m));
    return raw;
  }

 private:
  void collect(const std::string& prefix, bool buffers,
               std::vector<NamedTensor>& out) const;

  std::vector<NamedTensor> params_;
  std::vector<NamedTensor> buffers_;
  std::vector<std::pair<std::string, std::unique_ptr<Module>>> children_;
  bool training_ = true;
};

/// Convolution layer without bias. Weights are He-normal initialized.
class Conv2d : public Module {
 public:
  Conv2d(int in_channels, int out_channels, int kernel, ops::Conv2dOptions opt,
         Rng& rng);
  Tensor forward(const Tensor& x, const ExecMode& mode) const;
  const Tensor& weight() const { return weight_; }
  const ops::Conv2dOptions& options() const { return opt_; }

 private:
  Tensor weight_;
  ops::Conv2dOptions opt_;
};

class BatchNorm2d : public Module {
 public:
  BatchNorm2d(int channels, bool affine);
  Tensor forward(const Tensor& x);

 private:
  Tensor gamma_;
  Tensor beta_;
  Tensor running_mean_;
  Tensor running_var_;
};

class Linear : public Module {
 public:
  Linear(int in_features, int out_features, Rng& rng);
  Tensor forward(const Tensor& x) const;

 private:
  Tensor weight_;
  Tensor bias_;
};

}  // namespace axnas
