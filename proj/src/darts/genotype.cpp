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

#include "axnas/darts/genotype.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "axnas/errors.hpp"

namespace axnas::darts {
namespace {

struct Candidate {
  double strength;
  int op;
  int from;
};

void validate_cell(const std::vector<std::vector<GenotypeEdge>>& cell, const char* which) {
  for (std::size_t j = 0; j < cell.size(); ++j) {
    const auto& node = cell[j];
    if (node.size() != 2) {
      throw ConfigError(std::string("genotype ") + which + " node " + std::to_string(j) +
                        ": expected 2 inputs, got " + std::to_string(node.size()));
    }
    if (node[0].input == node[1].input) {
      throw ConfigError(std::string("genotype ") + which + " node " + std::to_string(j) +
                        ": inputs must be distinct");
    }
    for (const auto& e : node) {
      if (e.input < 0 || e.input >= static_cast<int>(j) + 2) {
        throw ConfigError(std::string("genotype ") + which + " node " + std::to_string(j) +
                          ": input " + std::to_string(e.input) + " out of range");
      }
      if (e.op == OpKind::kZero) {
        throw ConfigError(std::string("genotype ") + which + " node " + std::to_string(j) +
                          ": 'zero' cannot be retained");
      }
    }
  }
}

nlohmann::json cell_json(const std::vector<std::vector<GenotypeEdge>>& cell) {
  auto out = nlohmann::json::array();
  for (const auto& node : cell) {
    auto n = nlohmann::json::array();
    for (const auto& e : node) n.push_back({e.input, std::string(op_name(e.op))});
    out.push_back(n);
  }
  return out;
}

std::vector<std::vector<GenotypeEdge>> cell_from_json(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw ConfigError(std::string("genotype: missing array '") + key + "'");
  }
  std::vector<std::vector<GenotypeEdge>> cell;
  for (const auto& node : j[key]) {
    std::vector<GenotypeEdge> edges;
    for (const auto& e : node) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_string()) {
        throw ConfigError(std::string("genotype: '") + key + "' entries must be [input, op]");
      }
      auto op = parse_op(e[1].get<std::string>());
      if (!op) throw ConfigError("genotype: unknown op '" + e[1].get<std::string>() + "'");
      edges.push_back({e[0].get<int>(), *op});
    }
    cell.push_back(std::move(edges));
  }
  return cell;
}

}  // namespace

void Genotype::validate() const {
  if (normal.size() != reduce.size() || normal.empty()) {
    throw ConfigError("genotype: normal and reduce cells need the same, non-zero node count");
  }
  validate_cell(normal, "normal");
  validate_cell(reduce, "reduce");
  std::vector<int> expected;
  for (int j = 0; j < intermediate_nodes(); ++j) expected.push_back(j + 2);
  if (concat != expected) throw ConfigError("genotype: concat must list all intermediate nodes");
}

std::vector<std::vector<GenotypeEdge>> derive_cell(const Tensor& alphas) {
  const int nodes = CellTopology::nodes_for(alphas.dim(0));
  const CellTopology topo(nodes);
  auto a = alphas.data();
  std::vector<std::vector<GenotypeEdge>> cell;
  for (int j = 0; j < nodes; ++j) {
    std::vector<Candidate> cands;
    for (int from = 0; from < j + 2; ++from) {
      const double* row = a.data() + static_cast<std::size_t>(topo.edge_index(j, from)) * kNumOps;
      const double mx = *std::max_element(row, row + kNumOps);
      double sum = 0.0;
      for (int k = 0; k < kNumOps; ++k) sum += std::exp(row[k] - mx);
      int best = -1;
      double best_w = -1.0;
      for (int k = 0; k < kNumOps; ++k) {
        if (k == op_index(OpKind::kZero)) continue;
        const double w = std::exp(row[k] - mx) / sum;
        if (w > best_w) {
          best_w = w;
          best = k;
        }
      }
      cands.push_back({best_w, best, from});
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
      if (x.strength != y.strength) return x.strength > y.strength;
      if (x.op != y.op) return x.op < y.op;
      return x.from < y.from;
    });
    cell.push_back({{cands[0].from, kAllOps[cands[0].op]}, {cands[1].from, kAllOps[cands[1].op]}});
  }
  return cell;
}

Genotype derive_genotype(const ArchParams& alphas) {
  Genotype g;
  g.normal = derive_cell(alphas.normal);
  g.reduce = derive_cell(alphas.reduce);
  for (int j = 0; j < g.intermediate_nodes(); ++j) g.concat.push_back(j + 2);
  return g;
}

nlohmann::json genotype_to_json(const Genotype& g, const GenotypeProvenance& prov) {
  nlohmann::json j;
  j["version"] = kGenotypeFormatVersion;
  j["normal"] = cell_json(g.normal);
  j["reduce"] = cell_json(g.reduce);
  j["concat"] = g.concat;
  j["provenance"] = {{"multiplier", prov.multiplier},
                     {"seed", prov.seed},
                     {"config_hash", prov.config_hash},
                     {"manifest", prov.manifest}};
  return j;
}

Genotype genotype_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("genotype: expected a JSON object");
  if (j.value("version", 0) != kGenotypeFormatVersion) {
    throw ConfigError("genotype: unsupported version");
  }
  Genotype g;
  g.normal = cell_from_json(j, "normal");
  g.reduce = cell_from_json(j, "reduce");
  if (!j.contains("concat")) throw ConfigError("genotype: missing 'concat'");
  g.concat = j["concat"].get<std::vector<int>>();
  g.validate();
  return g;
}

void save_genotype(const Genotype& g, const GenotypeProvenance& prov,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError(path.string() + ": cannot open for writing");
  out << genotype_to_json(g, prov).dump(2) << '\n';
}

Genotype load_genotype(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open genotype");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return genotype_from_json(j);
}

std::string genotype_string(const Genotype& g) {
  std::ostringstream os;
  auto cell = [&](const char* name, const auto& c) {
    os << name << ": ";
    for (std::size_t j = 0; j < c.size(); ++j) {
      os << (j ? " | " : "") << j + 2 << " <- ";
      for (std::size_t k = 0; k < c[j].size(); ++k) {
        os << (k ? ", " : "") << op_name(c[j][k].op) << '(' << c[j][k].input << ')';
      }
    }
    os << '\n';
  };
  cell("normal", g.normal);
  cell("reduce", g.reduce);
  return os.str();
}

}  // namespace axnas::darts
