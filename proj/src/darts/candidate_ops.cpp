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

#include "axnas/darts/candidate_ops.hpp"

#include "axnas/errors.hpp"

namespace axnas::darts {
namespace {

constexpr std::array<std::string_view, kNumOps> kOpNames{
    "sep_conv_3x3", "sep_conv_5x5", "dil_conv_3x3", "dil_conv_5x5",
    "max_pool_3x3", "avg_pool_3x3", "skip_connect", "zero"};

ops::Conv2dOptions conv_opts(int stride, int padding, int dilation, int groups,
                             bool approximable) {
  ops::Conv2dOptions o;
  o.stride = stride;
  o.padding = padding;
  o.dilation = dilation;
  o.groups = groups;
  o.approximable = approximable;
  return o;
}

}  // namespace

std::string_view op_name(OpKind k) { return kOpNames[op_index(k)]; }

std::optional<OpKind> parse_op(std::string_view name) {
  for (int i = 0; i < kNumOps; ++i) {
    if (kOpNames[i] == name) return kAllOps[i];
  }
  return std::nullopt;
}

ReluConvBn::ReluConvBn(int c_in, int c_out, bool affine, bool approximable, Rng& rng) {
  conv_ = register_module("conv", std::make_unique<Conv2d>(
                                      c_in, c_out, 1, conv_opts(1, 0, 1, 1, approximable), rng));
  bn_ = register_module("bn", std::make_unique<BatchNorm2d>(c_out, affine));
}

Tensor ReluConvBn::forward(const Tensor& x, const ExecMode& mode) {
  return bn_->forward(conv_->forward(ops::relu(x), mode));
}

SepConv::SepConv(int c_in, int c_out, int kernel, int stride, bool affine, Rng& rng) {
  const int pad = kernel / 2;
  dw1_ = register_module("dw1", std::make_unique<Conv2d>(
                                    c_in, c_in, kernel, conv_opts(stride, pad, 1, c_in, true), rng));
  pw1_ = register_module("pw1", std::make_unique<Conv2d>(c_in, c_in, 1,
                                                         conv_opts(1, 0, 1, 1, true), rng));
  bn1_ = register_module("bn1", std::make_unique<BatchNorm2d>(c_in, affine));
  dw2_ = register_module("dw2", std::make_unique<Conv2d>(
                                    c_in, c_in, kernel, conv_opts(1, pad, 1, c_in, true), rng));
  pw2_ = register_module("pw2", std::make_unique<Conv2d>(c_in, c_out, 1,
                                                         conv_opts(1, 0, 1, 1, true), rng));
  bn2_ = register_module("bn2", std::make_unique<BatchNorm2d>(c_out, affine));
}

Tensor SepConv::forward(const Tensor& x, const ExecMode& mode) {
  Tensor h = bn1_->forward(pw1_->forward(dw1_->forward(ops::relu(x), mode), mode));
  return bn2_->forward(pw2_->forward(dw2_->forward(ops::relu(h), mode), mode));
}

DilConv::DilConv(int c_in, int c_out, int kernel, int stride, bool affine, Rng& rng) {
  const int pad = 2 * (kernel / 2);
  dw_ = register_module("dw", std::make_unique<Conv2d>(
                                  c_in, c_in, kernel, conv_opts(stride, pad, 2, c_in, true), rng));
  pw_ = register_module("pw", std::make_unique<Conv2d>(c_in, c_out, 1,
                                                       conv_opts(1, 0, 1, 1, true), rng));
  bn_ = register_module("bn", std::make_unique<BatchNorm2d>(c_out, affine));
}

Tensor DilConv::forward(const Tensor& x, const ExecMode& mode) {
  return bn_->forward(pw_->forward(dw_->forward(ops::relu(x), mode), mode));
}

Pool::Pool(bool max, int channels, int stride, bool with_bn) : max_(max), stride_(stride) {
  if (with_bn) bn_ = register_module("bn", std::make_unique<BatchNorm2d>(channels, false));
}

Tensor Pool::forward(const Tensor& x, const ExecMode&) {
  Tensor y = max_ ? ops::max_pool2d(x, 3, stride_, 1) : ops::avg_pool2d(x, 3, stride_, 1);
  return bn_ != nullptr ? bn_->forward(y) : y;
}

Tensor Zero::forward(const Tensor& x, const ExecMode&) {
  return ops::zeros_strided(x, stride_);
}

FactorizedReduce::FactorizedReduce(int c_in, int c_out, bool affine, bool approximable,
                                   Rng& rng) {
  const int half = c_out / 2;
  conv1_ = register_module("conv1", std::make_unique<Conv2d>(
                                        c_in, half, 1, conv_opts(2, 0, 1, 1, approximable), rng));
  conv2_ = register_module("conv2", std::make_unique<Conv2d>(
                                        c_in, c_out - half, 1,
                                        conv_opts(2, 0, 1, 1, approximable), rng));
  bn_ = register_module("bn", std::make_unique<BatchNorm2d>(c_out, affine));
}

Tensor FactorizedReduce::forward(const Tensor& x, const ExecMode& mode) {
  Tensor r = ops::relu(x);
  Tensor y = ops::concat_channels({conv1_->forward(r, mode),
                                   conv2_->forward(ops::shift_crop(r), mode)});
  return bn_->forward(y);
}

std::unique_ptr<CellOp> make_op(OpKind kind, int channels, int stride,
                                const OpOptions& opt, Rng& rng) {
  switch (kind) {
    case OpKind::kSepConv3x3:
      return std::make_unique<SepConv>(channels, channels, 3, stride, opt.affine, rng);
    case OpKind::kSepConv5x5:
      return std::make_unique<SepConv>(channels, channels, 5, stride, opt.affine, rng);
    case OpKind::kDilConv3x3:
      return std::make_unique<DilConv>(channels, channels, 3, stride, opt.affine, rng);
    case OpKind::kDilConv5x5:
      return std::make_unique<DilConv>(channels, channels, 5, stride, opt.affine, rng);
    case OpKind::kMaxPool3x3:
      return std::make_unique<Pool>(true, channels, stride, opt.pool_bn);
    case OpKind::kAvgPool3x3:
      return std::make_unique<Pool>(false, channels, stride, opt.pool_bn);
    case OpKind::kSkipConnect:
      if (stride == 1) return std::make_unique<Identity>();
      // Skip connections stay exact, including the strided variant.
      return std::make_unique<FactorizedReduce>(channels, channels, opt.affine, false, rng);
    case OpKind::kZero:
      return std::make_unique<Zero>(stride);
  }
  throw ConfigError("unknown op kind");
}

}  // namespace axnas::darts
