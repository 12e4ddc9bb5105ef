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

#include "axnas/tensor/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <stdexcept>

namespace axnas::checkpoint {
namespace {

constexpr char kMagic[8] = {'A', 'X', 'C', 'K', 'P', 'T', '0', '1'};

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

class Reader {
 public:
  Reader(std::string bytes, std::filesystem::path path)
      : bytes_(std::move(bytes)), path_(std::move(path)) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += 4;
    return v;
  }
  std::string str(std::size_t n) {
    need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) {
      throw std::runtime_error(path_.string() + ": truncated checkpoint at byte " +
                               std::to_string(pos_));
    }
  }
  std::string bytes_;
  std::filesystem::path path_;
  std::size_t pos_ = 0;
};

}  // namespace

void save(const std::vector<NamedTensor>& tensors,
          const std::filesystem::path& path) {
  std::string out(kMagic, sizeof(kMagic));
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(tensors.size()));
  for (const auto& [name, t] : tensors) {
    put_u32(out, static_cast<std::uint32_t>(name.size()));
    out += name;
    put_u32(out, static_cast<std::uint32_t>(t.rank()));
    for (int d : t.shape()) put_u32(out, static_cast<std::uint32_t>(d));
    for (double v : t.data()) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error(path.string() + ": cannot open for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
}

void save(const Module& module, const std::filesystem::path& path) {
  auto all = module.named_parameters();
  for (auto& b : module.named_buffers()) all.push_back(b);
  save(all, path);
}

std::vector<NamedTensor> read(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error(path.string() + ": cannot open checkpoint");
  Reader r(std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>()),
           path);
  if (r.str(8) != std::string(kMagic, 8)) {
    throw std::runtime_error(path.string() + ": not a checkpoint (bad magic)");
  }
  const std::uint32_t version = r.u32();
  if (version != kVersion) {
    throw std::runtime_error(path.string() + ": unsupported checkpoint version " +
                             std::to_string(version));
  }
  const std::uint32_t count = r.u32();
  std::vector<NamedTensor> out;
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string name = r.str(r.u32());
    Shape shape(r.u32());
    for (int& d : shape) d = static_cast<int>(r.u32());
    std::vector<double> data(shape_numel(shape));
    for (double& v : data) v = std::bit_cast<float>(r.u32());
    out.emplace_back(std::move(name), Tensor::from_data(std::move(shape), std::move(data)));
  }
  if (!r.done()) throw std::runtime_error(path.string() + ": trailing bytes in checkpoint");
  return out;
}

void load(const Module& module, const std::filesystem::path& path) {
  std::map<std::string, Tensor> entries;
  for (auto& [name, t] : read(path)) entries.emplace(name, t);
  auto targets = module.named_parameters();
  for (auto& b : module.named_buffers()) targets.push_back(b);
  for (auto& [name, t] : targets) {
    auto it = entries.find(name);
    if (it == entries.end()) {
      throw std::runtime_error(path.string() + ": missing tensor '" + name + "'");
    }
    if (it->second.shape() != t.shape()) {
      throw std::runtime_error(path.string() + ": shape mismatch for '" + name + "'");
    }
    auto src = it->second.data();
    std::copy(src.begin(), src.end(), t.data().begin());
  }
}

}  // namespace axnas::checkpoint
