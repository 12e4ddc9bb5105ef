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

#include <filesystem>
#include <vector>

#include "axnas/tensor/module.hpp"

namespace axnas::checkpoint {

// File layout (all integers little-endian):
//   "AXCKPT01"                    8-byte magic
//   u32 version                   currently 1
//   u32 count
//   count x {
//     u32 name_length, name bytes (UTF-8, no terminator)
//     u32 rank, rank x u32 dims
//     prod(dims) x f32 values, row-major
//   }
// Parameters come first, then buffers, each in module registration order.

inline constexpr std::uint32_t kVersion = 1;

void save(const std::vector<NamedTensor>& tensors,
          const std::filesystem::path& path);
void save(const Module& module, const std::filesystem::path& path);

/// Reads every entry; values are widened from f32.
std::vector<NamedTensor> read(const std::filesystem::path& path);

/// Copies entries into the module's parameters and buffers by name.
/// Throws std::runtime_error on a missing name or shape mismatch.
void load(const Module& module, const std::filesystem::path& path);

}  // namespace axnas::checkpoint
