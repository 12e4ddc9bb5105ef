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
#include <string>
#include <vector>

#include <json.hpp>

#include "axnas/darts/op_kind.hpp"
#include "axnas/darts/topology.hpp"

namespace axnas::darts {

/// One retained edge of a discretized cell: source state and operation.
struct GenotypeEdge {
  int input;  // 0, 1: cell inputs; 2 + j: intermediate node j
  OpKind op;
  bool operator==(const GenotypeEdge&) const = default;
};

/// Two retained edges per intermediate node, for both cell kinds.
struct Genotype {
  std::vector<std::vector<GenotypeEdge>> normal;
  std::vector<std::vector<GenotypeEdge>> reduce;
  std::vector<int> concat;

  int intermediate_nodes() const { return static_cast<int>(normal.size()); }
  bool operator==(const Genotype&) const = default;

  /// Throws ConfigError unless every node has two distinct, earlier,
  /// non-zero inputs and concat lists the intermediate nodes.
  void validate() const;
};

/// Provenance embedded in genotype files.
struct GenotypeProvenance {
  std::string multiplier;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::string manifest;  // file name of the run manifest, if any
};

inline constexpr int kGenotypeFormatVersion = 1;

/// Keeps, per intermediate node, the two incoming edges with the largest
/// non-zero softmax weight, each labeled with its best non-zero op. Ties
/// prefer the lower op index, then the lower source state.
Genotype derive_genotype(const ArchParams& alphas);
std::vector<std::vector<GenotypeEdge>> derive_cell(const Tensor& alphas);

nlohmann::json genotype_to_json(const Genotype& g, const GenotypeProvenance& prov);
Genotype genotype_from_json(const nlohmann::json& j);

void save_genotype(const Genotype& g, const GenotypeProvenance& prov,
                   const std::filesystem::path& path);
Genotype load_genotype(const std::filesystem::path& path);

std::string genotype_string(const Genotype& g);

}  // namespace axnas::darts
