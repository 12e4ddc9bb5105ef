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

#include "axnas/darts/topology.hpp"

#include "axnas/errors.hpp"

namespace axnas::darts {

CellTopology::CellTopology(int intermediate_nodes) : nodes_(intermediate_nodes) {
  if (nodes_ < 1) throw ConfigError("intermediate_nodes must be >= 1");
  for (int j = 0; j < nodes_; ++j) {
    for (int from = 0; from < j + 2; ++from) edges_.push_back({from, j});
  }
}

int CellTopology::first_edge(int node) const {
  if (node < 0 || node >= nodes_) throw ShapeError("node index out of range");
  return edges_for(node);
}

int CellTopology::nodes_for(int edges) {
  for (int n = 1; edges_for(n) <= edges; ++n) {
    if (edges_for(n) == edges) return n;
  }
  throw ConfigError(std::to_string(edges) + " is not a dense-cell edge count");
}

ArchParams ArchParams::init(const CellTopology& topo, Rng& rng, double stddev) {
  std::normal_distribution<double> dist(0.0, stddev);
  auto make = [&] {
    std::vector<double> v(static_cast<std::size_t>(topo.num_edges()) * kNumOps);
    for (double& x : v) x = dist(rng);
    return Tensor::from_data({topo.num_edges(), kNumOps}, std::move(v), true);
  };
  ArchParams a;
  a.normal = make();
  a.reduce = make();
  return a;
}

ArchParams ArchParams::clone() const {
  ArchParams a;
  a.normal = normal.clone();
  a.reduce = reduce.clone();
  a.normal.set_requires_grad(normal.requires_grad());
  a.reduce.set_requires_grad(reduce.requires_grad());
  return a;
}

}  // namespace axnas::darts
