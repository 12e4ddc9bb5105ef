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

#include "axnas/experiment/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>

#include "axnas/errors.hpp"

namespace axnas::experiment {
namespace {

constexpr int kCifarSide = 32;
constexpr std::size_t kCifarRecord = 1 + 3 * kCifarSide * kCifarSide;

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path.string() + ": cannot open");
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::uint32_t be32(const std::string& b, std::size_t off) {
  return (static_cast<std::uint32_t>(static_cast<unsigned char>(b[off])) << 24) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + 1])) << 16) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + 2])) << 8) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + 3]));
}

void append(Dataset& dst, const Dataset& src) {
  if (dst.size() == 0) {
    dst = src;
    return;
  }
  dst.images.insert(dst.images.end(), src.images.begin(), src.images.end());
  dst.labels.insert(dst.labels.end(), src.labels.begin(), src.labels.end());
}

Dataset cap(const Dataset& d, int n) {
  if (n <= 0 || static_cast<std::size_t>(n) >= d.size()) return d;
  std::vector<std::size_t> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  return d.subset(idx);
}

}  // namespace

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.channels = channels;
  out.height = height;
  out.width = width;
  out.num_classes = num_classes;
  out.images.reserve(indices.size() * image_numel());
  for (std::size_t i : indices) {
    auto img = image(i);
    out.images.insert(out.images.end(), img.begin(), img.end());
    out.labels.push_back(labels[i]);
  }
  return out;
}

Dataset load_cifar10_file(const std::filesystem::path& path) {
  const std::string bytes = read_all(path);
  if (bytes.empty() || bytes.size() % kCifarRecord != 0) {
    throw DataError(path.string() + ": size " + std::to_string(bytes.size()) +
                    " is not a multiple of the 3073-byte record length");
  }
  Dataset d;
  d.channels = 3;
  d.height = d.width = kCifarSide;
  d.num_classes = 10;
  const std::size_t n = bytes.size() / kCifarRecord;
  d.images.resize(n * d.image_numel());
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t off = r * kCifarRecord;
    const int label = static_cast<unsigned char>(bytes[off]);
    if (label >= 10) {
      throw DataError(path.string() + ": record " + std::to_string(r) + " has label " +
                      std::to_string(label) + " outside [0, 9]");
    }
    d.labels.push_back(label);
    for (std::size_t i = 0; i < d.image_numel(); ++i) {
      d.images[r * d.image_numel() + i] =
          static_cast<unsigned char>(bytes[off + 1 + i]) / 255.0;
    }
  }
  return d;
}

DataSplits load_cifar10(const std::filesystem::path& root) {
  std::filesystem::path dir = root;
  if (!std::filesystem::exists(dir / "test_batch.bin") &&
      std::filesystem::exists(root / "cifar-10-batches-bin")) {
    dir = root / "cifar-10-batches-bin";
  }
  DataSplits s;
  for (int i = 1; i <= 5; ++i) {
    append(s.train, load_cifar10_file(dir / ("data_batch_" + std::to_string(i) + ".bin")));
  }
  s.test = load_cifar10_file(dir / "test_batch.bin");
  return s;
}

Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels,
                 int num_classes) {
  const std::string ib = read_all(images);
  const std::string lb = read_all(labels);
  if (ib.size() < 16 || be32(ib, 0) != 0x00000803) {
    throw DataError(images.string() + ": bad IDX image magic (expected 0x00000803)");
  }
  if (lb.size() < 8 || be32(lb, 0) != 0x00000801) {
    throw DataError(labels.string() + ": bad IDX label magic (expected 0x00000801)");
  }
  const std::size_t n = be32(ib, 4), h = be32(ib, 8), w = be32(ib, 12);
  if (ib.size() != 16 + n * h * w) {
    throw DataError(images.string() + ": expected " + std::to_string(n * h * w) +
                    " pixel bytes, found " + std::to_string(ib.size() - 16));
  }
  if (be32(lb, 4) != n || lb.size() != 8 + n) {
    throw DataError(labels.string() + ": label count does not match " + std::to_string(n) +
                    " images");
  }
  Dataset d;
  d.channels = 1;
  d.height = static_cast<int>(h);
  d.width = static_cast<int>(w);
  d.num_classes = num_classes;
  d.images.resize(n * h * w);
  for (std::size_t i = 0; i < d.images.size(); ++i) {
    d.images[i] = static_cast<unsigned char>(ib[16 + i]) / 255.0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const int label = static_cast<unsigned char>(lb[8 + i]);
    if (label >= num_classes) {
      throw DataError(labels.string() + ": record " + std::to_string(i) + " has label " +
                      std::to_string(label) + " outside [0, " + std::to_string(num_classes - 1) +
                      "]");
    }
    d.labels.push_back(label);
  }
  return d;
}

DataSplits make_synthetic(const DatasetSpec& spec) {
  constexpr int kBlobs = 3;
  struct Blob {
    double cx, cy, sigma;
    std::vector<double> color;
  };
  const int S = spec.image_size, C = spec.channels;
  Rng class_rng(spec.seed);
  std::uniform_real_distribution<double> pos(0.2 * S, 0.8 * S);
  std::uniform_real_distribution<double> col(-1.0, 1.0);
  std::uniform_real_distribution<double> sig(0.08 * S, 0.18 * S);
  std::vector<std::vector<Blob>> classes(spec.num_classes);
  for (auto& blobs : classes) {
    for (int b = 0; b < kBlobs; ++b) {
      Blob blob{pos(class_rng), pos(class_rng), sig(class_rng), std::vector<double>(C)};
      for (double& c : blob.color) c = col(class_rng);
      blobs.push_back(std::move(blob));
    }
  }

  auto render = [&](int n, std::uint64_t stream) {
    Dataset d;
    d.channels = C;
    d.height = d.width = S;
    d.num_classes = spec.num_classes;
    d.images.assign(static_cast<std::size_t>(n) * C * S * S, 0.0);
    Rng rng(spec.seed * 0x9E3779B97F4A7C15ULL + stream);
    std::uniform_real_distribution<double> jitter(-0.1 * S, 0.1 * S);
    std::uniform_real_distribution<double> amp(0.7, 1.3);
    std::normal_distribution<double> noise(0.0, spec.noise);
    for (int i = 0; i < n; ++i) {
      const int label = i % spec.num_classes;
      d.labels.push_back(label);
      double* img = d.images.data() + static_cast<std::size_t>(i) * C * S * S;
      for (const Blob& b : classes[label]) {
        const double cx = b.cx + jitter(rng), cy = b.cy + jitter(rng), a = amp(rng);
        for (int y = 0; y < S; ++y) {
          for (int x = 0; x < S; ++x) {
            const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
            const double v = a * std::exp(-r2 / (2.0 * b.sigma * b.sigma));
            for (int c = 0; c < C; ++c) img[(c * S + y) * S + x] += v * b.color[c];
          }
        }
      }
      for (int k = 0; k < C * S * S; ++k) img[k] += noise(rng);
    }
    return d;
  };
  return {render(spec.train_samples, 1), render(spec.test_samples, 2)};
}

void standardize(DataSplits& splits) {
  Dataset& tr = splits.train;
  const std::size_t hw = static_cast<std::size_t>(tr.height) * tr.width;
  for (int c = 0; c < tr.channels; ++c) {
    double s = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
      const double* p = tr.images.data() + (i * tr.channels + c) * hw;
      for (std::size_t k = 0; k < hw; ++k) {
        s += p[k];
        s2 += p[k] * p[k];
      }
    }
    const double n = static_cast<double>(tr.size() * hw);
    const double mean = s / n;
    const double sd = std::sqrt(std::max(s2 / n - mean * mean, 1e-12));
    for (Dataset* d : {&splits.train, &splits.test}) {
      for (std::size_t i = 0; i < d->size(); ++i) {
        double* p = d->images.data() + (i * d->channels + c) * hw;
        for (std::size_t k = 0; k < hw; ++k) p[k] = (p[k] - mean) / sd;
      }
    }
  }
}

DataSplits load_dataset(const DatasetSpec& spec) {
  DataSplits s;
  if (spec.kind == "synthetic") {
    s = make_synthetic(spec);
  } else {
    std::filesystem::path root = spec.path;
    if (root.empty()) {
      const char* env = std::getenv("AXNAS_DATA_DIR");
      if (env == nullptr) {
        throw DataError("dataset.path is empty and AXNAS_DATA_DIR is not set");
      }
      root = env;
    }
    if (spec.kind == "cifar10") {
      s = load_cifar10(root);
    } else {
      s.train = load_idx(root / "train-images-idx3-ubyte", root / "train-labels-idx1-ubyte",
                         spec.num_classes);
      s.test = load_idx(root / "t10k-images-idx3-ubyte", root / "t10k-labels-idx1-ubyte",
                        spec.num_classes);
    }
    s.train = cap(s.train, spec.train_samples);
    s.test = cap(s.test, spec.test_samples);
  }
  if (s.train.size() == 0) throw DataError("dataset has no training samples");
  standardize(s);
  return s;
}

std::vector<darts::Batch> make_batches(const Dataset& data, std::span<const std::size_t> indices,
                                       int batch_size) {
  std::vector<darts::Batch> out;
  for (std::size_t start = 0; start < indices.size(); start += batch_size) {
    const std::size_t end = std::min(indices.size(), start + static_cast<std::size_t>(batch_size));
    darts::Batch b;
    std::vector<double> px;
    px.reserve((end - start) * data.image_numel());
    for (std::size_t k = start; k < end; ++k) {
      auto img = data.image(indices[k]);
      px.insert(px.end(), img.begin(), img.end());
      b.labels.push_back(data.labels[indices[k]]);
    }
    b.images = Tensor::from_data(
        {static_cast<int>(end - start), data.channels, data.height, data.width}, std::move(px));
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed, std::uint64_t stream) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed ^ (0xD1B54A32D192ED03ULL * (stream + 1)));
  // Fisher-Yates with an explicit draw so the order does not depend on the
  // standard library's shuffle implementation.
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(idx[i - 1], idx[j]);
  }
  return idx;
}

}  // namespace axnas::experiment
