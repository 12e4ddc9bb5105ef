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
#include <string>
#include <vector>

#include <json.hpp>

#include "axnas/tensor/exec_mode.hpp"

namespace axnas::experiment {

struct DatasetSpec {
  std::string kind = "synthetic";  // synthetic | cifar10 | idx
  std::string path;                // dataset root; AXNAS_DATA_DIR when empty
  int num_classes = 3;
  int image_size = 16;
  int channels = 3;
  int train_samples = 300;
  int test_samples = 150;
  std::uint64_t seed = 7;
  double noise = 0.35;
};

struct WeightOptConfig {
  double lr0 = 0.1;
  double momentum = 0.9;
  double weight_decay = 3e-4;
  double grad_clip = 5.0;
};

struct ArchOptConfig {
  double lr = 1e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double weight_decay = 1e-3;
};

struct SearchConfig {
  int cells = 8;
  int intermediate_nodes = 4;
  int init_channels = 16;
  int stem_multiplier = 3;
  int epochs = 50;
  int warmup_epochs = 15;
  int batch_size = 512;
  WeightOptConfig w_opt{0.1, 0.9, 3e-4, 5.0};
  ArchOptConfig a_opt;
  ExecMode mode = Fp32Exact{};
  bool approx_preprocess = false;
  std::uint64_t seed = 0;

  /// Throws ConfigError naming the offending key.
  void validate() const;
};

struct EvalConfig {
  int cells = 20;
  int init_channels = 32;
  int stem_multiplier = 3;
  int epochs = 600;
  int batch_size = 256;
  WeightOptConfig w_opt{0.025, 0.9, 3e-3, 5.0};
  double drop_path_prob = 0.3;
  int cutout_size = 16;  // 0 disables
  double aux_weight = 0.4;  // 0 disables the auxiliary head
  int aux_channels = 128;
  int aux_hidden = 768;
  ExecMode mode = Fp32Exact{};
  bool approx_preprocess = false;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Everything a CLI run needs, resolved from preset, file and overrides.
struct RunConfig {
  DatasetSpec dataset;
  SearchConfig search;
  EvalConfig eval;
  double fp32_factor = 18.5;
  nlohmann::json resolved;  // merged JSON the structs were parsed from
};

/// Names of the builtin presets: "paper", "desk".
std::vector<std::string> preset_names();
/// JSON form of a preset; also the schema every config file is checked
/// against. Throws ConfigError for an unknown name.
nlohmann::json preset_json(const std::string& name);

/// Reads a .toml or .json config file into JSON (no merging).
nlohmann::json read_config_file(const std::filesystem::path& path);

/// Deep-merges `overlay` into `base`. Keys absent from `base` are errors.
void merge_config(nlohmann::json& base, const nlohmann::json& overlay,
                  const std::string& prefix = "");

/// Preset (named by the file's `preset` key, default "paper") <- file <-
/// overrides. `path_or_preset` may also be a bare preset name.
RunConfig load_run_config(const std::string& path_or_preset,
                          const nlohmann::json& overrides = nlohmann::json::object());

RunConfig parse_run_config(const nlohmann::json& j);

/// "fp32" or a multiplier name/path.
ExecMode resolve_mode(const std::string& multiplier);

/// FNV-1a 64 of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& j);
std::string hex64(std::uint64_t v);

}  // namespace axnas::experiment
