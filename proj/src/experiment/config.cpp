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

#include "axnas/experiment/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "axnas/errors.hpp"
#include "axnas/experiment/toml.hpp"

namespace axnas::experiment {
namespace {

nlohmann::json paper_preset() {
  return {
      {"preset", "paper"},
      {"dataset",
       {{"kind", "cifar10"},
        {"path", ""},
        {"num_classes", 10},
        {"image_size", 32},
        {"channels", 3},
        {"train_samples", 50000},
        {"test_samples", 10000},
        {"seed", 7},
        {"noise", 0.35}}},
      {"search",
       {{"cells", 8},
        {"intermediate_nodes", 4},
        {"init_channels", 16},
        {"stem_multiplier", 3},
        {"epochs", 50},
        {"warmup_epochs", 15},
        {"batch_size", 512},
        {"multiplier", "fp32"},
        {"approx_preprocess", false},
        {"seed", 0},
        {"w_opt", {{"lr0", 0.1}, {"momentum", 0.9}, {"weight_decay", 3e-4}, {"grad_clip", 5.0}}},
        {"a_opt", {{"lr", 1e-4}, {"beta1", 0.5}, {"beta2", 0.999}, {"weight_decay", 1e-3}}}}},
      {"eval",
       {{"cells", 20},
        {"init_channels", 32},
        {"stem_multiplier", 3},
        {"epochs", 600},
        {"batch_size", 256},
        {"multiplier", "fp32"},
        {"approx_preprocess", false},
        {"seed", 0},
        {"drop_path_prob", 0.3},
        {"cutout_size", 16},
        {"aux_weight", 0.4},
        {"aux_channels", 128},
        {"aux_hidden", 768},
        {"w_opt", {{"lr0", 0.025}, {"momentum", 0.9}, {"weight_decay", 3e-3}, {"grad_clip", 5.0}}}}},
      {"energy", {{"fp32_factor", 18.5}}},
  };
}

nlohmann::json desk_preset() {
  auto j = paper_preset();
  j["preset"] = "desk";
  j["dataset"].update({{"kind", "synthetic"},
                       {"num_classes", 3},
                       {"image_size", 16},
                       {"channels", 3},
                       {"train_samples", 240},
                       {"test_samples", 150}});
  j["search"].update({{"cells", 4},
                      {"intermediate_nodes", 3},
                      {"init_channels", 8},
                      {"epochs", 10},
                      {"warmup_epochs", 3},
                      {"batch_size", 24}});
  j["search"]["w_opt"]["lr0"] = 0.05;
  j["search"]["a_opt"]["lr"] = 3e-3;
  j["eval"].update({{"cells", 4},
                    {"init_channels", 8},
                    {"epochs", 30},
                    {"batch_size", 24},
                    {"drop_path_prob", 0.1},
                    {"cutout_size", 4},
                    {"aux_weight", 0.4},
                    {"aux_channels", 32},
                    {"aux_hidden", 64}});
  j["eval"]["w_opt"].update({{"lr0", 0.05}, {"weight_decay", 3e-4}});
  return j;
}

template <typename T>
T get(const nlohmann::json& j, const std::string& section, const std::string& key) {
  const auto& v = j.at(key);
  const std::string name = section.empty() ? key : section + "." + key;
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) throw ConfigError("config key '" + name + "' must be a boolean");
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) throw ConfigError("config key '" + name + "' must be an integer");
    if constexpr (std::is_unsigned_v<T>) {
      if (v.get<long long>() < 0) throw ConfigError("config key '" + name + "' must be >= 0");
    }
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) throw ConfigError("config key '" + name + "' must be a number");
  } else {
    if (!v.is_string()) throw ConfigError("config key '" + name + "' must be a string");
  }
  return v.get<T>();
}

WeightOptConfig parse_w_opt(const nlohmann::json& j, const std::string& s) {
  return {get<double>(j, s, "lr0"), get<double>(j, s, "momentum"),
          get<double>(j, s, "weight_decay"), get<double>(j, s, "grad_clip")};
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError("config key '" + key + "' " + what);
}

void validate_w_opt(const WeightOptConfig& w, const std::string& s) {
  require(w.lr0 >= 0.0, s + ".lr0", "must be >= 0");
  require(w.momentum >= 0.0 && w.momentum < 1.0, s + ".momentum", "must be in [0, 1)");
  require(w.weight_decay >= 0.0, s + ".weight_decay", "must be >= 0");
}

}  // namespace

void SearchConfig::validate() const {
  require(cells >= 3, "search.cells", "must be >= 3");
  require(intermediate_nodes >= 2, "search.intermediate_nodes", "must be >= 2");
  require(init_channels >= 1, "search.init_channels", "must be >= 1");
  require(stem_multiplier >= 1, "search.stem_multiplier", "must be >= 1");
  require(epochs >= 1, "search.epochs", "must be >= 1");
  require(warmup_epochs >= 0 && warmup_epochs <= epochs, "search.warmup_epochs",
          "must be in [0, epochs]");
  require(batch_size >= 1, "search.batch_size", "must be >= 1");
  validate_w_opt(w_opt, "search.w_opt");
  require(a_opt.lr >= 0.0, "search.a_opt.lr", "must be >= 0");
  require(a_opt.beta1 >= 0.0 && a_opt.beta1 < 1.0, "search.a_opt.beta1", "must be in [0, 1)");
  require(a_opt.beta2 >= 0.0 && a_opt.beta2 < 1.0, "search.a_opt.beta2", "must be in [0, 1)");
}

void EvalConfig::validate() const {
  require(cells >= 3, "eval.cells", "must be >= 3");
  require(init_channels >= 1, "eval.init_channels", "must be >= 1");
  require(stem_multiplier >= 1, "eval.stem_multiplier", "must be >= 1");
  require(epochs >= 1, "eval.epochs", "must be >= 1");
  require(batch_size >= 1, "eval.batch_size", "must be >= 1");
  validate_w_opt(w_opt, "eval.w_opt");
  require(drop_path_prob >= 0.0 && drop_path_prob < 1.0, "eval.drop_path_prob",
          "must be in [0, 1)");
  require(cutout_size >= 0, "eval.cutout_size", "must be >= 0");
  require(aux_weight >= 0.0, "eval.aux_weight", "must be >= 0");
  require(aux_channels >= 1 && aux_hidden >= 1, "eval.aux_channels", "must be >= 1");
}

std::vector<std::string> preset_names() { return {"paper", "desk"}; }

nlohmann::json preset_json(const std::string& name) {
  if (name == "paper" || name == "paper-search" || name == "paper-eval") return paper_preset();
  if (name == "desk") return desk_preset();
  throw ConfigError("unknown preset '" + name + "' (known: paper, desk)");
}

nlohmann::json read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  if (path.extension() == ".json") {
    try {
      return nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(path.string() + ": " + e.what());
    }
  }
  return parse_toml(ss.str(), path.string());
}

void merge_config(nlohmann::json& base, const nlohmann::json& overlay,
                  const std::string& prefix) {
  if (!overlay.is_object()) throw ConfigError("config: expected a table at '" + prefix + "'");
  for (const auto& [key, value] : overlay.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (!base.contains(key)) throw ConfigError("unknown config key '" + name + "'");
    auto& slot = base[key];
    if (slot.is_object()) {
      merge_config(slot, value, name);
    } else if (value.is_object()) {
      throw ConfigError("config key '" + name + "' must not be a table");
    } else if (slot.is_number_float() && value.is_number_integer()) {
      slot = value.get<double>();
    } else {
      slot = value;
    }
  }
}

RunConfig load_run_config(const std::string& path_or_preset, const nlohmann::json& overrides) {
  nlohmann::json file = nlohmann::json::object();
  std::string preset = "paper";
  const std::filesystem::path path(path_or_preset);
  if (std::filesystem::exists(path)) {
    file = read_config_file(path);
    if (file.contains("preset")) {
      if (!file["preset"].is_string()) throw ConfigError("config key 'preset' must be a string");
      preset = file["preset"].get<std::string>();
    }
  } else {
    try {
      preset_json(path_or_preset);
    } catch (const ConfigError&) {
      throw ConfigError(path_or_preset + ": no such config file or preset");
    }
    preset = path_or_preset;
  }
  nlohmann::json merged = preset_json(preset);
  file.erase("preset");
  merge_config(merged, file);
  merge_config(merged, overrides);
  return parse_run_config(merged);
}

ExecMode resolve_mode(const std::string& multiplier) {
  if (multiplier == "fp32") return Fp32Exact{};
  return Quant8{mult::resolve_multiplier(multiplier), mult::QuantScheme::kAsymmetric};
}

RunConfig parse_run_config(const nlohmann::json& j) {
  RunConfig rc;
  const auto& d = j.at("dataset");
  rc.dataset.kind = get<std::string>(d, "dataset", "kind");
  rc.dataset.path = get<std::string>(d, "dataset", "path");
  rc.dataset.num_classes = get<int>(d, "dataset", "num_classes");
  rc.dataset.image_size = get<int>(d, "dataset", "image_size");
  rc.dataset.channels = get<int>(d, "dataset", "channels");
  rc.dataset.train_samples = get<int>(d, "dataset", "train_samples");
  rc.dataset.test_samples = get<int>(d, "dataset", "test_samples");
  rc.dataset.seed = get<std::uint64_t>(d, "dataset", "seed");
  rc.dataset.noise = get<double>(d, "dataset", "noise");
  if (rc.dataset.kind != "synthetic" && rc.dataset.kind != "cifar10" && rc.dataset.kind != "idx") {
    throw ConfigError("config key 'dataset.kind' must be synthetic, cifar10 or idx");
  }
  require(rc.dataset.num_classes >= 2, "dataset.num_classes", "must be >= 2");
  require(rc.dataset.image_size >= 4, "dataset.image_size", "must be >= 4");
  require(rc.dataset.channels >= 1, "dataset.channels", "must be >= 1");

  const auto& s = j.at("search");
  auto& sc = rc.search;
  sc.cells = get<int>(s, "search", "cells");
  sc.intermediate_nodes = get<int>(s, "search", "intermediate_nodes");
  sc.init_channels = get<int>(s, "search", "init_channels");
  sc.stem_multiplier = get<int>(s, "search", "stem_multiplier");
  sc.epochs = get<int>(s, "search", "epochs");
  sc.warmup_epochs = get<int>(s, "search", "warmup_epochs");
  sc.batch_size = get<int>(s, "search", "batch_size");
  sc.approx_preprocess = get<bool>(s, "search", "approx_preprocess");
  sc.seed = get<std::uint64_t>(s, "search", "seed");
  sc.w_opt = parse_w_opt(s.at("w_opt"), "search.w_opt");
  const auto& a = s.at("a_opt");
  sc.a_opt = {get<double>(a, "search.a_opt", "lr"), get<double>(a, "search.a_opt", "beta1"),
              get<double>(a, "search.a_opt", "beta2"),
              get<double>(a, "search.a_opt", "weight_decay")};
  sc.mode = resolve_mode(get<std::string>(s, "search", "multiplier"));
  sc.validate();

  const auto& e = j.at("eval");
  auto& ec = rc.eval;
  ec.cells = get<int>(e, "eval", "cells");
  ec.init_channels = get<int>(e, "eval", "init_channels");
  ec.stem_multiplier = get<int>(e, "eval", "stem_multiplier");
  ec.epochs = get<int>(e, "eval", "epochs");
  ec.batch_size = get<int>(e, "eval", "batch_size");
  ec.approx_preprocess = get<bool>(e, "eval", "approx_preprocess");
  ec.seed = get<std::uint64_t>(e, "eval", "seed");
  ec.drop_path_prob = get<double>(e, "eval", "drop_path_prob");
  ec.cutout_size = get<int>(e, "eval", "cutout_size");
  ec.aux_weight = get<double>(e, "eval", "aux_weight");
  ec.aux_channels = get<int>(e, "eval", "aux_channels");
  ec.aux_hidden = get<int>(e, "eval", "aux_hidden");
  ec.w_opt = parse_w_opt(e.at("w_opt"), "eval.w_opt");
  ec.mode = resolve_mode(get<std::string>(e, "eval", "multiplier"));
  ec.validate();

  rc.fp32_factor = get<double>(j.at("energy"), "energy", "fp32_factor");
  require(rc.fp32_factor > 0.0, "energy.fp32_factor", "must be > 0");
  rc.resolved = j;
  return rc;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string config_hash(const nlohmann::json& j) {
  const std::string s = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return hex64(h);
}

}  // namespace axnas::experiment
