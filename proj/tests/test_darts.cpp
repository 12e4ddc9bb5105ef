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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "axnas/darts/bilevel.hpp"
#include "axnas/darts/genotype.hpp"
#include "axnas/errors.hpp"
#include "support/gradcheck.hpp"
#include "support/oracles.hpp"

namespace axnas::darts {
namespace {

using testing::random_tensor;

TEST(Topology, EdgeCounts) {
  EXPECT_EQ(CellTopology::edges_for(4), 14);
  EXPECT_EQ(CellTopology::edges_for(3), 9);
  EXPECT_EQ(CellTopology::nodes_for(14), 4);
  EXPECT_ANY_THROW(CellTopology::nodes_for(13));
  const CellTopology t(4);
  EXPECT_EQ(t.num_edges(), 14);
  EXPECT_EQ(t.first_edge(0), 0);
  EXPECT_EQ(t.first_edge(1), 2);
  EXPECT_EQ(t.first_edge(2), 5);
  EXPECT_EQ(t.first_edge(3), 9);
  EXPECT_EQ(t.edges()[t.edge_index(3, 4)].from, 4);
  EXPECT_EQ(t.edges()[t.edge_index(3, 4)].to, 3);
}

TEST(Topology, ArchParamsInit) {
  Rng rng(1);
  const auto a = ArchParams::init(CellTopology(4), rng);
  EXPECT_EQ(a.normal.shape(), (Shape{14, kNumOps}));
  EXPECT_EQ(a.reduce.shape(), (Shape{14, kNumOps}));
  EXPECT_TRUE(a.normal.requires_grad());
  double sq = 0;
  for (double v : a.normal.data()) sq += v * v;
  EXPECT_NEAR(std::sqrt(sq / a.normal.numel()), 1e-3, 3e-4);
  auto c = a.clone();
  c.normal.data()[0] += 1.0;
  EXPECT_NE(c.normal.at(0), a.normal.at(0));
}

TEST(CellPlan, EightCellProgression) {
  const auto plan = cell_plan(8, 16);
  const std::vector<int> channels{16, 16, 32, 32, 32, 64, 64, 64};
  ASSERT_EQ(plan.size(), 8u);
  for (int i = 0; i < 8; ++i) {
    EXPECT_EQ(plan[i].channels, channels[i]) << i;
    EXPECT_EQ(plan[i].reduction, i == 2 || i == 5) << i;
  }
  const auto p20 = cell_plan(20, 36);
  EXPECT_TRUE(p20[6].reduction);
  EXPECT_TRUE(p20[13].reduction);
  EXPECT_EQ(p20[19].channels, 144);
  EXPECT_THROW(cell_plan(2, 16), ConfigError);
}

TEST(Supernet, LogitShapeAndOpOrder) {
  Rng rng(2);
  NetworkShape s;
  s.cells = 3;
  s.intermediate_nodes = 2;
  s.init_channels = 4;
  s.num_classes = 5;
  auto net = build_supernet(s, rng);
  const auto alphas = ArchParams::init(net->topology(), rng);
  Tensor y = net->forward(random_tensor(rng, {2, 3, 8, 8}), alphas, Fp32Exact{});
  EXPECT_EQ(y.shape(), (Shape{2, 5}));
  EXPECT_EQ(op_name(kAllOps[0]), "sep_conv_3x3");
  EXPECT_EQ(op_name(kAllOps[7]), "zero");
  EXPECT_EQ(parse_op("dil_conv_5x5"), OpKind::kDilConv5x5);
  EXPECT_FALSE(parse_op("conv_7x7").has_value());
}

TEST(MixedOp, WeightedSumOfCandidates) {
  Rng rng(3);
  OpOptions opt;
  opt.affine = false;
  opt.pool_bn = true;
  MixedOp m(3, 1, opt, rng);
  m.eval();
  Tensor x = random_tensor(rng, {1, 3, 5, 5});
  std::vector<double> w(kNumOps);
  for (int k = 0; k < kNumOps; ++k) w[k] = 0.1 * (k + 1);
  Tensor y = m.forward(x, Tensor::from_data({kNumOps}, w), Fp32Exact{});
  std::vector<double> expected(y.numel(), 0.0);
  for (int k = 0; k < kNumOps; ++k) {
    Tensor o = m.op(kAllOps[k]).forward(x, Fp32Exact{});
    for (std::size_t i = 0; i < expected.size(); ++i) expected[i] += w[k] * o.at(i);
  }
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(y.at(i), expected[i], 1e-12);
}

Tensor alpha_rows(const std::vector<std::vector<double>>& rows) {
  std::vector<double> flat;
  for (const auto& r : rows) {
    std::vector<double> full(kNumOps, 0.0);
    std::copy(r.begin(), r.end(), full.begin());
    flat.insert(flat.end(), full.begin(), full.end());
  }
  return Tensor::from_data({static_cast<int>(rows.size()), kNumOps}, flat);
}

TEST(Genotype, HandDerivedCell) {
  // Two nodes, five edges. Strengths worked out by hand:
  //   node 0: only two edges, sep_conv_3x3 from 0 and max_pool from 1.
  //   node 1: from 0 the best non-zero op is skip with weight
  //   e/(e^5 + e + 6) ~ 0.017; from 1 dil_conv_5x5 e^3/(e^3 + 7) ~ 0.74;
  //   from 2 avg_pool e^2/(e^2 + 7) ~ 0.51. Keep from 1 then from 2.
  const Tensor a = alpha_rows({{2},
                               {0, 0, 0, 0, 1},
                               {0, 0, 0, 0, 0, 0, 1, 5},
                               {0, 0, 0, 3},
                               {0, 0, 0, 0, 0, 2}});
  const auto cell = derive_cell(a);
  ASSERT_EQ(cell.size(), 2u);
  EXPECT_EQ(cell[0][0], (GenotypeEdge{0, OpKind::kSepConv3x3}));
  EXPECT_EQ(cell[0][1], (GenotypeEdge{1, OpKind::kMaxPool3x3}));
  EXPECT_EQ(cell[1][0], (GenotypeEdge{1, OpKind::kDilConv5x5}));
  EXPECT_EQ(cell[1][1], (GenotypeEdge{2, OpKind::kAvgPool3x3}));
}

TEST(Genotype, TiesPreferLowerOpThenLowerSource) {
  const Tensor a = Tensor::zeros({9, kNumOps});
  const auto cell = derive_cell(a);
  for (const auto& node : cell) {
    EXPECT_EQ(node[0], (GenotypeEdge{0, OpKind::kSepConv3x3}));
    EXPECT_EQ(node[1], (GenotypeEdge{1, OpKind::kSepConv3x3}));
  }
}

TEST(Genotype, ZeroDominatedEdgesStillYieldNonZeroOps) {
  Rng rng(4);
  for (int t = 0; t < 50; ++t) {
    Tensor a = random_tensor(rng, {14, kNumOps});
    for (int e = 0; e < 14; ++e) a.data()[e * kNumOps + 7] = 10.0;
    ArchParams p{a, a};
    const auto g = derive_genotype(p);
    g.validate();
    for (const auto& node : g.normal) {
      for (const auto& e : node) EXPECT_NE(e.op, OpKind::kZero);
    }
  }
}

TEST(Genotype, InvariantToPerEdgeShifts) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> shift(0.0, 3.0);
  for (int t = 0; t < 200; ++t) {
    ArchParams a{random_tensor(rng, {14, kNumOps}), random_tensor(rng, {9 + 5, kNumOps})};
    ArchParams b = a.clone();
    for (Tensor* m : {&b.normal, &b.reduce}) {
      for (int e = 0; e < 14; ++e) {
        const double c = shift(rng);
        for (int k = 0; k < kNumOps; ++k) m->data()[e * kNumOps + k] += c;
      }
    }
    EXPECT_EQ(derive_genotype(a), derive_genotype(b));
  }
}

TEST(Genotype, JsonRoundTripAndErrors) {
  std::mt19937_64 rng(6);
  const auto g = testing::random_genotype(rng, 4);
  const auto j = genotype_to_json(g, {"trunc_2", 3, "abc", "m.json"});
  EXPECT_EQ(j["version"], kGenotypeFormatVersion);
  EXPECT_EQ(j["provenance"]["multiplier"], "trunc_2");
  EXPECT_EQ(genotype_from_json(j), g);

  auto bad = j;
  bad["normal"][0][0][1] = "conv_9x9";
  EXPECT_THROW(genotype_from_json(bad), ConfigError);
  bad = j;
  bad["normal"][0][1][1] = "zero";
  EXPECT_THROW(genotype_from_json(bad), ConfigError);
  bad = j;
  bad["normal"][1][1][0] = bad["normal"][1][0][0];
  EXPECT_THROW(genotype_from_json(bad), ConfigError);
  bad = j;
  bad["normal"][0][0][0] = 2;  // node 0 cannot read itself
  EXPECT_THROW(genotype_from_json(bad), ConfigError);
  bad = j;
  bad["concat"] = {2, 3};
  EXPECT_THROW(genotype_from_json(bad), ConfigError);

  const auto path = std::filesystem::temp_directory_path() / "axnas_genotype_test.json";
  save_genotype(g, {"exact", 0, "h", ""}, path);
  EXPECT_EQ(load_genotype(path), g);
  {
    std::ofstream out(path);
    out << "{not json";
  }
  EXPECT_THROW(load_genotype(path), ConfigError);
}

TEST(Genotype, StringForm) {
  Genotype g;
  g.normal = {{{0, OpKind::kSkipConnect}, {1, OpKind::kSepConv3x3}}};
  g.reduce = {{{1, OpKind::kMaxPool3x3}, {0, OpKind::kDilConv5x5}}};
  g.concat = {2};
  EXPECT_EQ(genotype_string(g),
            "normal: 2 <- skip_connect(0), sep_conv_3x3(1)\n"
            "reduce: 2 <- max_pool_3x3(1), dil_conv_5x5(0)\n");
}

struct SearchFixture {
  Rng rng{7};
  std::unique_ptr<Supernet> net;
  ArchParams alphas;
  std::vector<Batch> train, val;

  SearchFixture() {
    NetworkShape s;
    s.cells = 3;
    s.intermediate_nodes = 2;
    s.init_channels = 3;
    s.num_classes = 3;
    net = build_supernet(s, rng);
    alphas = ArchParams::init(net->topology(), rng);
    for (int i = 0; i < 2; ++i) {
      train.push_back({random_tensor(rng, {4, 3, 8, 8}), {0, 1, 2, 0}});
      val.push_back({random_tensor(rng, {4, 3, 8, 8}), {1, 2, 0, 1}});
    }
  }
  std::vector<std::vector<double>> weights() const {
    std::vector<std::vector<double>> out;
    for (const auto& p : net->parameters()) out.emplace_back(p.data().begin(), p.data().end());
    return out;
  }
};

std::vector<double> values(const Tensor& t) { return {t.data().begin(), t.data().end()}; }

TEST(Bilevel, WarmupKeepsAlphaBitIdentical) {
  SearchFixture f;
  const auto n0 = values(f.alphas.normal), r0 = values(f.alphas.reduce);
  const auto w0 = f.weights();
  optim::Sgd w_opt(f.net->parameters(), {0.9, 3e-4});
  optim::Adam a_opt(f.alphas.tensors(), {1e-2, 0.5, 0.999, 1e-3, 1e-8});
  BilevelOptions opt{4, 2, 0.05, 5.0};
  for (int epoch = 0; epoch < 2; ++epoch) {
    const auto st = bilevel_epoch(*f.net, f.alphas, f.train, f.val, w_opt, a_opt, epoch, opt,
                                  Fp32Exact{});
    EXPECT_EQ(st.arch_steps, 0);
    EXPECT_EQ(st.weight_steps, 2);
  }
  EXPECT_EQ(values(f.alphas.normal), n0);
  EXPECT_EQ(values(f.alphas.reduce), r0);
  EXPECT_NE(f.weights(), w0);
  const auto st = bilevel_epoch(*f.net, f.alphas, f.train, f.val, w_opt, a_opt, 2, opt,
                                Fp32Exact{});
  EXPECT_EQ(st.arch_steps, 2);
  EXPECT_NE(values(f.alphas.normal), n0);
}

TEST(Bilevel, ZeroWeightLrOnlyMovesAlpha) {
  SearchFixture f;
  const auto n0 = values(f.alphas.normal);
  const auto w0 = f.weights();
  optim::Sgd w_opt(f.net->parameters(), {0.9, 3e-4});
  optim::Adam a_opt(f.alphas.tensors(), {1e-2, 0.5, 0.999, 1e-3, 1e-8});
  BilevelOptions opt{3, 0, 0.0, 5.0};
  bilevel_epoch(*f.net, f.alphas, f.train, f.val, w_opt, a_opt, 0, opt, Fp32Exact{});
  EXPECT_EQ(f.weights(), w0);
  EXPECT_NE(values(f.alphas.normal), n0);
}

TEST(Bilevel, EmptySplitsAreDataErrors) {
  SearchFixture f;
  optim::Sgd w_opt(f.net->parameters(), {0.9, 3e-4});
  optim::Adam a_opt(f.alphas.tensors(), {});
  BilevelOptions opt{3, 0, 0.1, 5.0};
  EXPECT_THROW(bilevel_epoch(*f.net, f.alphas, {}, f.val, w_opt, a_opt, 0, opt, Fp32Exact{}),
               DataError);
  EXPECT_THROW(bilevel_epoch(*f.net, f.alphas, f.train, {}, w_opt, a_opt, 0, opt, Fp32Exact{}),
               DataError);
}

}  // namespace
}  // namespace axnas::darts
