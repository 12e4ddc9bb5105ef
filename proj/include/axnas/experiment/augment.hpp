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

#include "axnas/tensor/module.hpp"

namespace axnas::experiment {

/// Zeroes one size x size square centred at a uniformly drawn pixel,
/// clipped at the borders, in every channel of a CHW image.
void cutout(std::span<double> image, int channels, int height, int width, int size, Rng& rng);

/// Per-sample Bernoulli drop of a residual branch: survivors are scaled by
/// 1 / (1 - prob). Identity when not training or prob == 0.
Tensor drop_path(const Tensor& x, double prob, Rng& rng, bool training);

}  // namespace axnas::experiment
