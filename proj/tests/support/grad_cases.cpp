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

#include "support/grad_cases.hpp"

#include "axnas/darts/candidate_ops.hpp"
#include "axnas/darts/mixed_op.hpp"
#include "support/gradcheck.hpp"

namespace axnas::testing {
namespace {

int pick(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

std::vector<int> random_labels(std::mt19937_64& rng, int n, int classes) {
  std::vector<int> v(n);
  for (int& x : v) x = pick(rng, 0, classes - 1);
  return v;
}

double conv_case(std::mt19937_64& rng) {
  const int groups = pick(rng, 1, 2);
  const int cg = pick(rng, 1, 2), ocg = pick(rng, 1, 2);
  const int k = pick(rng, 1, 3);
  ops::Conv2dOptions opt;
  opt.stride = pick(rng, 1, 2);
  opt.dilation = pick(rng, 1, 2);
  opt.padding = pick(rng, 0, 2);
  opt.groups = groups;
  const int hw = opt.dilation * (k - 1) + pick(rng, 1, 4);
  const bool with_bias = pick(rng, 0, 1) == 1;
  std::vector<Tensor> in{random_tensor(rng, {2, groups * cg, hw, hw}, true),
                         random_tensor(rng, {groups * ocg, cg, k, k}, true)};
  if (with_bias) in.push_back(random_tensor(rng, {groups * ocg}, true));
  return gradcheck(
      [opt, with_bias](std::vector<Tensor>& t) {
        return ops::conv2d(t[0], t[1], with_bias ? t[2] : Tensor(), opt, Fp32Exact{});
      },
      in, rng);
}

double batch_norm_case(std::mt19937_64& rng, bool affine) {
  const int c = pick(rng, 1, 3);
  std::vector<Tensor> in{random_tensor(rng, {pick(rng, 2, 3), c, 3, 3}, true)};
  if (affine) {
    in.push_back(random_tensor(rng, {c}, true, 0.5, 1.5));
    in.push_back(random_tensor(rng, {c}, true));
  }
  return gradcheck(
      [c, affine](std::vector<Tensor>& t) {
        Tensor mean = Tensor::zeros({c}), var = Tensor::full({c}, 1.0);
        return ops::batch_norm(t[0], mean, var, affine ? t[1] : Tensor(),
                               affine ? t[2] : Tensor(), ops::BatchNormOptions{});
      },
      in, rng);
}

// Composite candidate ops, differentiated with respect to their input and
// every parameter.
double module_case(std::mt19937_64& rng, darts::OpKind kind) {
  const int c = 2;
  const int stride = pick(rng, 1, 2);
  darts::OpOptions opt;
  opt.affine = pick(rng, 0, 1) == 1;
  opt.pool_bn = true;
  auto op = darts::make_op(kind, c, stride, opt, rng);
  std::vector<Tensor> in{random_tensor(rng, {2, c, 6, 6}, true)};
  for (auto& p : op->parameters()) in.push_back(p);
  darts::CellOp* raw = op.get();
  return gradcheck([raw](std::vector<Tensor>& t) { return raw->forward(t[0], Fp32Exact{}); },
                   in, rng);
}

}  // namespace

std::vector<GradCase> gradient_cases() {
  std::vector<GradCase> cases;
  cases.push_back({"conv2d", conv_case});
  cases.push_back({"relu", [](auto& rng) {
                     return gradcheck([](auto& t) { return ops::relu(t[0]); },
                                      {random_tensor(rng, {2, 3, 4}, true)}, rng);
                   }});
  cases.push_back({"add_n", [](auto& rng) {
                     const int n = pick(rng, 2, 4);
                     std::vector<Tensor> in;
                     for (int i = 0; i < n; ++i) in.push_back(random_tensor(rng, {2, 5}, true));
                     return gradcheck([](auto& t) { return ops::add_n(t); }, in, rng);
                   }});
  cases.push_back({"scale", [](auto& rng) {
                     const double s = std::uniform_real_distribution<double>(-2, 2)(rng);
                     return gradcheck([s](auto& t) { return ops::scale(t[0], s); },
                                      {random_tensor(rng, {7}, true)}, rng);
                   }});
  cases.push_back({"weighted_sum", [](auto& rng) {
                     const int n = pick(rng, 2, 5);
                     std::vector<Tensor> in{random_tensor(rng, {n}, true)};
                     for (int i = 0; i < n; ++i) in.push_back(random_tensor(rng, {2, 2, 3}, true));
                     return gradcheck(
                         [](auto& t) {
                           return ops::weighted_sum(std::vector<Tensor>(t.begin() + 1, t.end()),
                                                    t[0]);
                         },
                         in, rng);
                   }});
  cases.push_back({"select_row", [](auto& rng) {
                     const int r = pick(rng, 0, 3);
                     return gradcheck([r](auto& t) { return ops::select_row(t[0], r); },
                                      {random_tensor(rng, {4, 8}, true)}, rng);
                   }});
  cases.push_back({"softmax", [](auto& rng) {
                     return gradcheck([](auto& t) { return ops::softmax(t[0]); },
                                      {random_tensor(rng, {pick(rng, 2, 8)}, true, -3, 3)}, rng);
                   }});
  cases.push_back({"batch_norm", [](auto& rng) { return batch_norm_case(rng, true); }});
  cases.push_back({"batch_norm_plain", [](auto& rng) { return batch_norm_case(rng, false); }});
  cases.push_back({"max_pool2d", [](auto& rng) {
                     const int s = pick(rng, 1, 2), p = pick(rng, 0, 1);
                     return gradcheck([s, p](auto& t) { return ops::max_pool2d(t[0], 3, s, p); },
                                      {random_tensor(rng, {2, 2, 5, 5}, true)}, rng);
                   }});
  cases.push_back({"avg_pool2d", [](auto& rng) {
                     const int s = pick(rng, 1, 2), p = pick(rng, 0, 1);
                     return gradcheck([s, p](auto& t) { return ops::avg_pool2d(t[0], 3, s, p); },
                                      {random_tensor(rng, {2, 2, 5, 5}, true)}, rng);
                   }});
  cases.push_back({"concat_channels", [](auto& rng) {
                     std::vector<Tensor> in{random_tensor(rng, {2, pick(rng, 1, 3), 3, 3}, true),
                                            random_tensor(rng, {2, pick(rng, 1, 3), 3, 3}, true)};
                     return gradcheck([](auto& t) { return ops::concat_channels(t); }, in, rng);
                   }});
  cases.push_back({"shift_crop", [](auto& rng) {
                     return gradcheck([](auto& t) { return ops::shift_crop(t[0]); },
                                      {random_tensor(rng, {2, 2, 4, 5}, true)}, rng);
                   }});
  cases.push_back({"global_avg_pool", [](auto& rng) {
                     return gradcheck([](auto& t) { return ops::global_avg_pool(t[0]); },
                                      {random_tensor(rng, {2, 3, 4, 4}, true)}, rng);
                   }});
  cases.push_back({"flatten", [](auto& rng) {
                     return gradcheck([](auto& t) { return ops::flatten(t[0]); },
                                      {random_tensor(rng, {2, 3, 2, 2}, true)}, rng);
                   }});
  cases.push_back({"linear", [](auto& rng) {
                     const int in_f = pick(rng, 1, 6), out_f = pick(rng, 1, 5);
                     return gradcheck(
                         [](auto& t) { return ops::linear(t[0], t[1], t[2]); },
                         {random_tensor(rng, {3, in_f}, true), random_tensor(rng, {out_f, in_f}, true),
                          random_tensor(rng, {out_f}, true)},
                         rng);
                   }});
  cases.push_back({"softmax_cross_entropy", [](auto& rng) {
                     const int n = pick(rng, 1, 4), k = pick(rng, 2, 5);
                     const auto labels = random_labels(rng, n, k);
                     return gradcheck(
                         [labels](auto& t) { return ops::softmax_cross_entropy(t[0], labels); },
                         {random_tensor(rng, {n, k}, true, -3, 3)}, rng);
                   }});
  cases.push_back({"mse_loss", [](auto& rng) {
                     const auto target = random_values(rng, 6);
                     return gradcheck([target](auto& t) { return ops::mse_loss(t[0], target); },
                                      {random_tensor(rng, {2, 3}, true)}, rng);
                   }});
  cases.push_back({"mul_per_sample", [](auto& rng) {
                     const auto mask = random_values(rng, 3);
                     return gradcheck([mask](auto& t) { return ops::mul_per_sample(t[0], mask); },
                                      {random_tensor(rng, {3, 2, 2, 2}, true)}, rng);
                   }});
  cases.push_back({"mixed_op", [](auto& rng) {
                     darts::OpOptions opt;
                     opt.affine = false;
                     opt.pool_bn = true;
                     auto op = std::make_shared<darts::MixedOp>(2, pick(rng, 1, 2), opt, rng);
                     std::vector<Tensor> in{random_tensor(rng, {2, 2, 5, 5}, true),
                                            random_tensor(rng, {darts::kNumOps}, true)};
                     return gradcheck(
                         [op](auto& t) { return op->forward(t[0], ops::softmax(t[1]), Fp32Exact{}); },
                         in, rng);
                   }});
  cases.push_back({"sep_conv", [](auto& rng) { return module_case(rng, darts::OpKind::kSepConv3x3); }});
  cases.push_back({"dil_conv", [](auto& rng) { return module_case(rng, darts::OpKind::kDilConv3x3); }});
  cases.push_back({"factorized_reduce", [](auto& rng) {
                     auto fr = std::make_shared<darts::FactorizedReduce>(2, 4, true, false, rng);
                     std::vector<Tensor> in{random_tensor(rng, {2, 2, 4, 4}, true)};
                     for (auto& p : fr->parameters()) in.push_back(p);
                     return gradcheck([fr](auto& t) { return fr->forward(t[0], Fp32Exact{}); },
                                      in, rng);
                   }});
  cases.push_back({"dot_const", [](auto& rng) {
                     const auto c = random_values(rng, 5);
                     return gradcheck([c](auto& t) { return ops::dot_const(t[0], c); },
                                      {random_tensor(rng, {5}, true)}, rng);
                   }});
  cases.push_back({"zeros_strided", [](auto& rng) {
                     return gradcheck([](auto& t) { return ops::add(ops::zeros_strided(t[0], 2),
                                                                   ops::avg_pool2d(t[0], 1, 2, 0)); },
                                      {random_tensor(rng, {2, 2, 4, 4}, true)}, rng);
                   }});
  return cases;
}

}  // namespace axnas::testing
