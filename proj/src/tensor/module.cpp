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

#include "axnas/tensor/module.hpp"

#include <cmath>

namespace axnas {

Tensor Module::register_parameter(std::string name, Tensor t) {
  t.set_requires_grad(true);
  params_.emplace_back(std::move(name), t);
  return t;
}

Tensor Module::register_buffer(std::string name, Tensor t) {
  buffers_.emplace_back(std::move(name), t);
  return t;
}

void Module::collect(const std::string& prefix, bool buffers,
                     std::vector<NamedTensor>& out) const {
  for (const auto& [name, t] : buffers ? buffers_ : params_) {
    out.emplace_back(prefix + name, t);
  }
  for (const auto& [name, child] : children_) {
    child->collect(prefix + name + ".", buffers, out);
  }
}

std::vector<NamedTensor> Module::named_parameters() const {
  std::vector<NamedTensor> out;
  collect("", false, out);
  return out;
}

std::vector<Tensor> Module::parameters() const {
  std::vector<Tensor> out;
  for (auto& [_, t] : named_parameters()) out.push_back(t);
  return out;
}

std::vector<NamedTensor> Module::named_buffers() const {
  std::vector<NamedTensor> out;
  collect("", true, out);
  return out;
}

std::size_t Module::num_parameters() const {
  std::size_t n = 0;
  for (const auto& [_, t] : named_parameters()) n += t.numel();
  return n;
}

void Module::train(bool on) {
  training_ = on;
  for (auto& [_, child] : children_) child->train(on);
}

Conv2d::Conv2d(int in_channels, int out_channels, int kernel,
               ops::Conv2dOptions opt, Rng& rng)
    : opt_(opt) {
  const int fan_in = (in_channels / opt.groups) * kernel * kernel;
  std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / fan_in));
  std::vector<double> w(static_cast<std::size_t>(out_channels) * fan_in);
  for (double& v : w) v = dist(rng);
  weight_ = register_parameter(
      "weight", Tensor::from_data({out_channels, in_channels / opt.groups, kernel, kernel},
                                  std::move(w)));
}

Tensor Conv2d::forward(const Tensor& x, const ExecMode& mode) const {
  return ops::conv2d(x, weight_, Tensor(), opt_, mode);
}

BatchNorm2d::BatchNorm2d(int channels, bool affine) {
  if (affine) {
    gamma_ = register_parameter("gamma", Tensor::full({channels}, 1.0));
    beta_ = register_parameter("beta", Tensor::zeros({channels}));
  }
  running_mean_ = register_buffer("running_mean", Tensor::zeros({channels}));
  running_var_ = register_buffer("running_var", Tensor::full({channels}, 1.0));
}

Tensor BatchNorm2d::forward(const Tensor& x) {
  ops::BatchNormOptions opt;
  opt.training = is_training();
  return ops::batch_norm(x, running_mean_, running_var_, gamma_, beta_, opt);
}

Linear::Linear(int in_features, int out_features, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in_features));
  std::uniform_real_distribution<double> dist(-bound, bound);
  std::vector<double> w(static_cast<std::size_t>(in_features) * out_features);
  for (double& v : w) v = dist(rng);
  std::vector<double> b(out_features);
  for (double& v : b) v = dist(rng);
  weight_ = register_parameter("weight",
                               Tensor::from_data({out_features, in_features}, std::move(w)));
  bias_ = register_parameter("bias", Tensor::from_data({out_features}, std::move(b)));
}

Tensor Linear::forward(const Tensor& x) const {
  return ops::linear(x, weight_, bias_);
}

}  // namespace axnas
