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

#include "support/ste.hpp"

#include <cmath>

#include "axnas/darts/candidate_ops.hpp"
#include "axnas/mult/multiplier.hpp"
#include "support/gradcheck.hpp"

namespace axnas::testing {
namespace {

ExecMode trunc3() {
  return Quant8{mult::resolve_multiplier("trunc_3"), mult::QuantScheme::kAsymmetric};
}

bool same_values(const Tensor& a, const Tensor& b) {
  for (std::size_t i = 0; i < a.numel(); ++i) {
    if (a.at(i) != b.at(i)) return false;
  }
  return true;
}

bool same_grads(const Tensor& a, const Tensor& b) {
  for (std::size_t i = 0; i < a.numel(); ++i) {
    if (a.grad()[i] != b.grad()[i]) return false;
  }
  return true;
}

}  // namespace

SteResult conv_ste(std::mt19937_64& rng, const Shape& xs, const Shape& ws,
                   const ops::Conv2dOptions& opt) {
  Tensor x1 = random_tensor(rng, xs, true), w1 = random_tensor(rng, ws, true);
  Tensor x2 = x1.clone(), w2 = w1.clone();
  x2.set_requires_grad(true);
  w2.set_requires_grad(true);
  Tensor y1 = ops::conv2d(x1, w1, Tensor(), opt, Fp32Exact{});
  Tensor y2 = ops::conv2d(x2, w2, Tensor(), opt, trunc3());
  const auto seed = random_values(rng, y1.numel());
  y1.backward(seed);
  y2.backward(seed);
  return {!same_values(y1, y2), same_grads(x1, x2) && same_grads(w1, w2)};
}

SteResult conv_ste_geometries(std::mt19937_64& rng) {
  SteResult all{true, true};
  auto acc = [&](const SteResult& r) {
    all.forward_differs = all.forward_differs && r.forward_differs;
    all.grads_equal = all.grads_equal && r.grads_equal;
  };
  const int c = 4;
  for (int stride : {1, 2}) {
    ops::Conv2dOptions o;
    o.approximable = true;
    o.stride = stride;
    o.groups = c;
    for (int k : {3, 5}) {
      o.padding = k / 2;  // sep_conv depthwise
      o.dilation = 1;
      acc(conv_ste(rng, {2, c, 8, 8}, {c, 1, k, k}, o));
      o.padding = 2 * (k / 2);  // dil_conv depthwise
      o.dilation = 2;
      acc(conv_ste(rng, {2, c, 8, 8}, {c, 1, k, k}, o));
    }
  }
  ops::Conv2dOptions pw;
  pw.approximable = true;
  acc(conv_ste(rng, {2, c, 8, 8}, {c, c, 1, 1}, pw));
  ops::Conv2dOptions dense;
  dense.approximable = true;
  dense.padding = 1;
  acc(conv_ste(rng, {2, 3, 6, 6}, {5, 3, 3, 3}, dense));
  return all;
}

SteResult module_ste(darts::OpKind kind, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto op = darts::make_op(kind, 4, 1, darts::OpOptions{}, rng);
  op->eval();
  for (auto& [name, p] : op->named_parameters()) {
    if (name == "bn1.beta") {
      for (auto& v : p.data()) v = 1e3;
    }
  }
  Tensor x1 = random_tensor(rng, {2, 4, 8, 8}, true);
  Tensor x2 = x1.clone();
  x2.set_requires_grad(true);
  Tensor y1 = op->forward(x1, Fp32Exact{});
  Tensor y2 = op->forward(x2, trunc3());
  const auto g = random_values(rng, y1.numel());
  y1.backward(g);
  y2.backward(g);
  return {!same_values(y1, y2), same_grads(x1, x2)};
}

}  // namespace axnas::testing
