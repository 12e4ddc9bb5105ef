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
#include <filesystem>
#include <random>
#include <span>
#include <vector>

#include "axnas/darts/bilevel.hpp"
#include "axnas/experiment/config.hpp"

namespace axnas::experiment {

/// Images stored NCHW as reals, with integer labels.
struct Dataset {
  int channels = 0;
  int height = 0;
  int width = 0;
  int num_classes = 0;
  std::vector<double> images;
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  std::size_t image_numel() const {
    return static_cast<std::size_t>(channels) * height * width;
  }
  std::span<const double> image(std::size_t i) const {
    return std::span<const double>(images).subspan(i * image_numel(), image_numel());
  }
  Dataset subset(std::span<const std::size_t> indices) const;
};

struct DataSplits {
  Dataset train;
  Dataset test;
};

/// CIFAR-10 binary batch file: 3073-byte records (label + 3x32x32 bytes).
Dataset load_cifar10_file(const std::filesystem::path& path);
/// data_batch_1..5.bin and test_batch.bin under `root` (or
/// root/cifar-10-batches-bin).
DataSplits load_cifar10(const std::filesystem::path& root);

/// IDX pair: images (magic 0x00000803, dims N x H x W) and labels
/// (magic 0x00000801, dim N). Pixels are scaled to [0, 1].
Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels,
                 int num_classes);

/// Seeded Gaussian-blob textures: each class owns a few coloured blobs
/// whose positions and amplitudes are jittered per sample, plus noise.
DataSplits make_synthetic(const DatasetSpec& spec);

/// Resolves the spec (kind, path or AXNAS_DATA_DIR) and applies per-channel
/// standardization with statistics of the training set. The `train_samples`
/// and `test_samples` caps apply to file-backed datasets too.
DataSplits load_dataset(const DatasetSpec& spec);

/// Standardizes both splits in place with the training mean/std.
void standardize(DataSplits& splits);

/// Batches of `indices` in order; the last batch may be smaller.
std::vector<darts::Batch> make_batches(const Dataset& data, std::span<const std::size_t> indices,
                                       int batch_size);

/// 0..n-1 shuffled with a generator seeded from (seed, stream).
std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed, std::uint64_t stream);

}  // namespace axnas::experiment
