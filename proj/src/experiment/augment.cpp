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

#include "axnas/experiment/augment.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace axnas::experiment {

void cutout(std::span<double> image, int channels, int height, int width, int size, Rng& rng) {
  if (size <= 0) return;
  if (image.size() != static_cast<std::size_t>(channels) * height * width) {
    throw std::invalid_argument("cutout: image size does not match C*H*W");
  }
  std::uniform_int_distribution<int> ry(0, height - 1), rx(0, width - 1);
  const int cy = ry(rng), cx = rx(rng);
  const int y0 = std::max(0, cy - size / 2), y1 = std::min(height, cy - size / 2 + size);
  const int x0 = std::max(0, cx - size / 2), x1 = std::min(width, cx - size / 2 + size);
  for (int c = 0; c < channels; ++c) {
    for (int y = y0; y < y1; ++y) {
      for (int x = x0; x < x1; ++x) image[(static_cast<std::size_t>(c) * height + y) * width + x] = 0.0;
    }
  }
}

Tensor drop_path(const Tensor& x, double prob, Rng& rng, bool training) {
  if (!training || prob <= 0.0) return x;
  if (prob >= 1.0) throw std::invalid_argument("drop_path: prob must be < 1");
  const double keep = 1.0 - prob;
  std::bernoulli_distribution survive(keep);
  std::vector<double> mask(static_cast<std::size_t>(x.dim(0)));
  for (double& m : mask) m = survive(rng) ? 1.0 / keep : 0.0;
  return ops::mul_per_sample(x, mask);
}

}  // namespace axnas::experiment
