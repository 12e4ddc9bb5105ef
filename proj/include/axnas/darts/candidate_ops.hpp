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

#include "axnas/darts/op_kind.hpp"
#include "axnas/tensor/module.hpp"

namespace axnas::darts {

/// A unary feature-map operation on one cell edge (or cell preprocessing).
class CellOp : public Module {
 public:
  virtual Tensor forward(const Tensor& x, const ExecMode& mode) = 0;
};

/// ReLU -> 1x1 conv -> BN. Used for cell input preprocessing.
class ReluConvBn : public CellOp {
 public:
  ReluConvBn(int c_in, int c_out, bool affine, bool approximable, Rng& rng);
  Tensor forward(const Tensor& x, const ExecMode& mode) override;

 private:
  Conv2d* conv_;
  BatchNorm2d* bn_;
};

/// (ReLU -> depthwise kxk -> pointwise 1x1 -> BN) twice; only the first
/// depthwise conv is strided.
class SepConv : public CellOp {
 public:
  SepConv(int c_in, int c_out, int kernel, int stride, bool affine, Rng& rng);
  Tensor forward(const Tensor& x, const ExecMode& mode) override;

 private:
  Conv2d *dw1_, *pw1_, *dw2_, *pw2_;
  BatchNorm2d *bn1_, *bn2_;
};

/// ReLU -> depthwise kxk with dilation 2 -> pointwise 1x1 -> BN.
class DilConv : public CellOp {
 public:
  DilConv(int c_in, int c_out, int kernel, int stride, bool affine, Rng& rng);
  Tensor forward(const Tensor& x, const ExecMode& mode) override;

 private:
  Conv2d *dw_, *pw_;
  BatchNorm2d* bn_;
};

/// 3x3 max or average pooling, optionally followed by a non-affine BN
/// (the search-stage convention).
class Pool : public CellOp {
 public:
  Pool(bool max, int channels, int stride, bool with_bn);
  Tensor forward(const Tensor& x, const ExecMode& mode) override;

 private:
  bool max_;
  int stride_;
  BatchNorm2d* bn_ = nullptr;
};

class Identity : public CellOp {
 public:
  Tensor forward(const Tensor& x, const ExecMode&) override { return x; }
};

class Zero : public CellOp {
 public:
  explicit Zero(int stride) : stride_(stride) {}
  Tensor forward(const Tensor& x, const ExecMode&) override;

 private:
  int stride_;
};

/// ReLU -> two stride-2 1x1 convs, the second on the input shifted by one
/// pixel -> channel concat -> BN. Halves the spatial size.
class FactorizedReduce : public CellOp {
 public:
  FactorizedReduce(int c_in, int c_out, bool affine, bool approximable, Rng& rng);
  Tensor forward(const Tensor& x, const ExecMode& mode) override;

 private:
  Conv2d *conv1_, *conv2_;
  BatchNorm2d* bn_;
};

struct OpOptions {
  bool affine = true;
  /// Append a BN after pooling ops (search stage).
  bool pool_bn = false;
};

std::unique_ptr<CellOp> make_op(OpKind kind, int channels, int stride,
                                const OpOptions& opt, Rng& rng);

}  // namespace axnas::darts
