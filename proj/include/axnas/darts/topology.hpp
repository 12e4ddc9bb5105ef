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

#include <vector>

#include "axnas/darts/op_kind.hpp"
#include "axnas/tensor/module.hpp"

namespace axnas::darts {

/// Dense cell DAG. States 0 and 1 are the cell inputs (outputs of the two
/// previous cells); state 2 + j is intermediate node j. Every intermediate
/// node has an edge from every earlier state.
class CellTopology {
 public:
  struct Edge {
    int from;  // state index
    int to;    // intermediate node index
  };

  explicit CellTopology(int intermediate_nodes);

  int intermediate_nodes() const { return nodes_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  /// Index of the first edge entering node j; node j has j + 2 edges.
  int first_edge(int node) const;
  int edge_index(int node, int from) const { return first_edge(node) + from; }

  /// sum_{j < nodes} (j + 2)
  static int edges_for(int nodes) { return nodes * (nodes + 3) / 2; }
  /// Inverse of edges_for; throws if `edges` is not a valid count.
  static int nodes_for(int edges);

 private:
  int nodes_;
  std::vector<Edge> edges_;
};

/// Architecture logits: one row of kNumOps values per edge, shared by all
/// cells of the same kind.
struct ArchParams {
  Tensor normal;  // (num_edges, kNumOps)
  Tensor reduce;  // (num_edges, kNumOps)

  /// i.i.d. N(0, stddev^2) logits.
  static ArchParams init(const CellTopology& topo, Rng& rng, double stddev = 1e-3);
  std::vector<Tensor> tensors() const { return {normal, reduce}; }
  ArchParams clone() const;
};

}  // namespace axnas::darts
