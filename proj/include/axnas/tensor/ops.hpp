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

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "axnas/tensor/exec_mode.hpp"
#include "axnas/tensor/tensor.hpp"

namespace axnas::ops {

// All image tensors are NCHW.

struct Conv2dOptions {
  int stride = 1;
  int padding = 0;
  int dilation = 1;
  int groups = 1;
  /// Eligible for LUT execution; when false the mode is ignored and the
  /// convolution always runs in real arithmetic.
  bool approximable = false;
};

/// Output spatial size of a convolution/pooling window.
int conv_out_size(int in, int kernel, int stride, int padding, int dilation);

/// 2-D convolution. Under Quant8 (and `approximable`), input and weights are
/// calibrated per tensor, quantized to u8, and every product goes through
/// the multiplier table; zero-point cross terms are accumulated exactly in
/// 64-bit integers. The backward pass is always the real-arithmetic one
/// (straight-through).
Tensor conv2d(const Tensor& input, const Tensor& weight, const Tensor& bias,
              const Conv2dOptions& opt, const ExecMode& mode);

/// Calibration used by the Quant8 convolution path: the tensor's min/max
/// range widened to contain 0, so real zero (and padding) is exact.
mult::QuantParams calibrate_tensor(std::span<const double> values,
                                   mult::QuantScheme scheme);

Tensor relu(const Tensor& x);
Tensor add(const Tensor& a, const Tensor& b);
Tensor add_n(const std::vector<Tensor>& xs);
Tensor scale(const Tensor& x, double s);

/// Sum_i w[i] * xs[i] with a 1-D weight tensor that may require grad.
Tensor weighted_sum(const std::vector<Tensor>& xs, const Tensor& weights);

/// Row r of a 2-D tensor as a 1-D tensor.
Tensor select_row(const Tensor& m, int r);

/// Max-subtracted softmax of a 1-D tensor.
Tensor softmax(const Tensor& logits);

/// Per-channel batch normalization. `running_mean`/`running_var` are
/// updated in place in training mode (momentum `momentum`, unbiased
/// variance). `gamma`/`beta` may be undefined (no affine transform).
struct BatchNormOptions {
  bool training = true;
  double momentum = 0.1;
  double eps = 1e-5;
};
Tensor batch_norm(const Tensor& x, Tensor& running_mean, Tensor& running_var,
                  const Tensor& gamma, const Tensor& beta,
                  const BatchNormOptions& opt);

/// Square-window pooling with `padding` on every side. Max pooling treats
/// padding as -inf; average pooling excludes padded cells from the count.
Tensor max_pool2d(const Tensor& x, int kernel, int stride, int padding);
Tensor avg_pool2d(const Tensor& x, int kernel, int stride, int padding);

/// Zeros with the spatial shape a 1x1 window at `stride` would produce.
/// Connected to `x` with a zero gradient.
Tensor zeros_strided(const Tensor& x, int stride);

Tensor concat_channels(const std::vector<Tensor>& xs);

/// x[:, :, 1:, 1:] padded with a trailing zero row/column (same shape).
Tensor shift_crop(const Tensor& x);

/// (N, C, H, W) -> (N, C)
Tensor global_avg_pool(const Tensor& x);

/// (N, ...) -> (N, prod(...))
Tensor flatten(const Tensor& x);

/// x: (N, in), weight: (out, in), bias: (out) or undefined.
Tensor linear(const Tensor& x, const Tensor& weight, const Tensor& bias);

/// Mean cross-entropy of softmax(logits) against integer labels; scalar.
Tensor softmax_cross_entropy(const Tensor& logits, std::span<const int> labels);

/// Mean squared error against a constant target; scalar.
Tensor mse_loss(const Tensor& pred, std::span<const double> target);

/// Multiplies sample n of x by mask[n] (mask is constant).
Tensor mul_per_sample(const Tensor& x, std::span<const double> mask);

/// Sum of x[i] * coeffs[i]; scalar. Used as a generic probe loss.
Tensor dot_const(const Tensor& x, std::span<const double> coeffs);

/// Index of the largest logit per row.
std::vector<int> argmax_rows(const Tensor& logits);

}  // namespace axnas::ops
